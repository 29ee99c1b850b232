#pragma once

#include "epidd/model.hpp"
#include "epidd/timestep.hpp"

#include <array>
#include <vector>

namespace epidd {

// Proportions s, e, i, r, d.
using OdeState = std::array<double, n_compartments>;

struct OdeParameters {
    double allee = 0.0;  // enters as (1 - A)
    double beta_i = 0.0, beta_e = 0.0;
    double sigma = 0.0, gamma_e = 0.0, gamma_r = 0.0, gamma_d = 0.0;

    // Rates from a PDE parameter set with beta scaled by the population density.
    static OdeParameters from_model(const ModelParameters& p, double population);
};

OdeState ode_rhs(const OdeParameters& p, const OdeState& y);

struct OdeTrajectory {
    std::vector<double> t;
    std::vector<OdeState> y;
};

// Classical RK4 with step dt/10, sampled every dt.
OdeTrajectory ode_solve(const OdeParameters& p, const OdeState& y0, double dt, double t_end);

struct OdeLimitOptions {
    double population = 10.0;
    double t_end = 210.0;
    double dt = 0.1;
    Index mesh_n = 32;
    double nu = 1e-20;
    double picard_tol = 1e-10;
    // The system is a scaled mass matrix, so plain GMRES beats factorizing it.
    SolverSettings solver = {.pc = PcKind::none, .krylov = {}, .amg = {}};
};

struct OdeLimitResult {
    // Max over time of |PDE integral / total - ODE| per compartment.
    std::array<double, n_compartments> max_discrepancy{};
    OdeTrajectory ode;
    OdeTrajectory pde;  // normalized integrals
    int picard_failures = 0;
    int linear_failures = 0;
};

OdeLimitResult pde_ode_compare(const OdeLimitOptions& opt);

}  // namespace epidd
