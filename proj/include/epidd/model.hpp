#pragma once

#include "epidd/csr.hpp"

#include <array>
#include <functional>
#include <string>

namespace epidd {

enum class Compartment : int { s = 0, e = 1, i = 2, r = 3, d = 4 };
inline constexpr int n_compartments = 5;
inline constexpr std::array<const char*, n_compartments> compartment_names{"S", "E", "I", "R", "D"};

// (x, y, t) -> value.
using SpaceTimeFunction = std::function<double(double, double, double)>;

SpaceTimeFunction constant_function(double value);

// Spatial infection-rate profile: a central value blended toward eastern and
// western values by two logistic steps in x.
struct RegionalBeta {
    double beta_central = 0.0;
    double beta_eastern = 0.0;
    double beta_western = 0.0;
    double x_eastern = 0.0;
    double x_western = 0.0;

    double spatial(double x) const;
    // Logistic drop from 0.101 to 0.051 centered at day 130.
    static double temporal(double t);
    double operator()(double x, double t) const { return temporal(t) * spatial(x); }
};

struct ModelParameters {
    double allee = 0.0;  // A, people/km^2
    SpaceTimeFunction beta_i = constant_function(0.0);
    SpaceTimeFunction beta_e = constant_function(0.0);
    double nu_s = 0.0, nu_e = 0.0, nu_i = 0.0, nu_r = 0.0;
    double gamma_r = 0.0, gamma_d = 0.0, gamma_e = 0.0, sigma = 0.0;
    double alpha = 0.0, mu = 0.0;

    double nu(Compartment c) const;
    // Throws std::invalid_argument on negative rates or nonzero vital dynamics.
    void validate() const;

    // Unit-square benchmark column of the parameter table.
    static ModelParameters square_domain();
    // Provincial column; beta comes from the regional profile.
    static ModelParameters ontario(const RegionalBeta& beta);
};

struct StateFields {
    std::array<Vector, n_compartments> u;

    StateFields() = default;
    explicit StateFields(Index n);

    Vector& operator[](Compartment c) { return u[static_cast<int>(c)]; }
    const Vector& operator[](Compartment c) const { return u[static_cast<int>(c)]; }
    Vector& operator[](int c) { return u[c]; }
    const Vector& operator[](int c) const { return u[c]; }

    Index size() const { return static_cast<Index>(u[0].size()); }
    Vector total() const;
    // Euclidean norm of the five fields stacked.
    double stacked_norm() const;
    bool all_finite() const;
};

double stacked_distance(const StateFields& a, const StateFields& b);

}  // namespace epidd
