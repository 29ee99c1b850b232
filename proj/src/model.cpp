#include "epidd/model.hpp"

#include <cmath>
#include <stdexcept>

namespace epidd {

SpaceTimeFunction constant_function(double value)
{
    return [value](double, double, double) { return value; };
}

double RegionalBeta::spatial(double x) const
{
    return beta_central + (beta_eastern - beta_central) / (1.0 + std::exp(-5.0 * (x - x_eastern))) +
           (beta_western - beta_central) / (1.0 + std::exp(10.0 * (x - x_western)));
}

double RegionalBeta::temporal(double t) { return 0.101 - 0.05 / (1.0 + std::exp(130.0 - t)); }

double ModelParameters::nu(Compartment c) const
{
    switch (c) {
    case Compartment::s: return nu_s;
    case Compartment::e: return nu_e;
    case Compartment::i: return nu_i;
    case Compartment::r: return nu_r;
    case Compartment::d: return 0.0;
    }
    return 0.0;
}

void ModelParameters::validate() const
{
    const std::array<std::pair<const char*, double>, 9> rates{{{"nu_s", nu_s},
                                                               {"nu_e", nu_e},
                                                               {"nu_i", nu_i},
                                                               {"nu_r", nu_r},
                                                               {"gamma_r", gamma_r},
                                                               {"gamma_d", gamma_d},
                                                               {"gamma_e", gamma_e},
                                                               {"sigma", sigma},
                                                               {"allee", allee}}};
    for (const auto& [name, v] : rates)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("model parameter ") + name + " must be finite and >= 0");
    if (alpha != 0.0 || mu != 0.0)
        throw std::invalid_argument("vital dynamics (alpha, mu) are not supported and must be zero");
    if (!beta_i || !beta_e) throw std::invalid_argument("infection rates are not set");
}

ModelParameters ModelParameters::square_domain()
{
    ModelParameters p;
    p.allee = 500.0;
    p.beta_i = constant_function(3.78e-4);
    p.beta_e = constant_function(3.78e-4);
    p.nu_s = p.nu_e = p.nu_r = 3.94e-6;
    p.nu_i = 1e-8;
    p.gamma_r = 1.0 / 24.0;
    p.gamma_d = 1.0 / 160.0;
    p.sigma = 1.0 / 7.0;
    p.gamma_e = 1.0 / 6.0;
    return p;
}

ModelParameters ModelParameters::ontario(const RegionalBeta& beta)
{
    ModelParameters p;
    p.allee = 8.9e-3;
    auto f = [beta](double x, double, double t) { return beta(x, t); };
    p.beta_i = f;
    p.beta_e = f;
    p.nu_s = p.nu_e = p.nu_r = 4.5e-7;
    p.nu_i = 1e-9;
    p.gamma_r = 1.0 / 11.0;
    p.gamma_d = 1.0 / 750.0;
    p.sigma = 1.0 / 5.0;
    p.gamma_e = 1.0 / 15.0;
    return p;
}

StateFields::StateFields(Index n)
{
    for (auto& v : u) v.assign(n, 0.0);
}

Vector StateFields::total() const
{
    Vector n(u[0].size(), 0.0);
    for (const auto& v : u)
        for (std::size_t k = 0; k < v.size(); ++k) n[k] += v[k];
    return n;
}

double StateFields::stacked_norm() const
{
    double s = 0.0;
    for (const auto& v : u)
        for (double x : v) s += x * x;
    return std::sqrt(s);
}

bool StateFields::all_finite() const
{
    for (const auto& v : u)
        for (double x : v)
            if (!std::isfinite(x)) return false;
    return true;
}

double stacked_distance(const StateFields& a, const StateFields& b)
{
    double s = 0.0;
    for (int c = 0; c < n_compartments; ++c)
        for (std::size_t k = 0; k < a[c].size(); ++k) {
            const double d = a[c][k] - b[c][k];
            s += d * d;
        }
    return std::sqrt(s);
}

}  // namespace epidd
