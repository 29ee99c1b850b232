#include "epidd/ode.hpp"

#include "epidd/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace epidd {

OdeParameters OdeParameters::from_model(const ModelParameters& p, double population)
{
    OdeParameters o;
    o.allee = 0.0;
    o.beta_i = p.beta_i(0.0, 0.0, 0.0) * population;
    o.beta_e = p.beta_e(0.0, 0.0, 0.0) * population;
    o.sigma = p.sigma;
    o.gamma_e = p.gamma_e;
    o.gamma_r = p.gamma_r;
    o.gamma_d = p.gamma_d;
    return o;
}

OdeState ode_rhs(const OdeParameters& p, const OdeState& y)
{
    const double f = 1.0 - p.allee;
    const auto [s, e, i, r, d] = y;
    (void)r;
    (void)d;
    const double infection = f * p.beta_i * s * i + f * p.beta_e * s * e;
    return {-infection, infection - p.sigma * e - p.gamma_e * e, p.sigma * e - p.gamma_r * i - p.gamma_d * i,
            p.gamma_e * e + p.gamma_r * i, p.gamma_d * i};
}

OdeTrajectory ode_solve(const OdeParameters& p, const OdeState& y0, double dt, double t_end)
{
    const int steps = static_cast<int>(std::lround(t_end / dt));
    const double h = dt / 10.0;
    OdeTrajectory tr;
    tr.t.push_back(0.0);
    tr.y.push_back(y0);
    OdeState y = y0;
    auto add = [](const OdeState& a, const OdeState& b, double s) {
        OdeState o;
        for (int k = 0; k < n_compartments; ++k) o[k] = a[k] + s * b[k];
        return o;
    };
    for (int n = 0; n < steps; ++n) {
        for (int sub = 0; sub < 10; ++sub) {
            const OdeState k1 = ode_rhs(p, y);
            const OdeState k2 = ode_rhs(p, add(y, k1, h / 2));
            const OdeState k3 = ode_rhs(p, add(y, k2, h / 2));
            const OdeState k4 = ode_rhs(p, add(y, k3, h));
            for (int k = 0; k < n_compartments; ++k) y[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        }
        tr.t.push_back((n + 1) * dt);
        tr.y.push_back(y);
    }
    return tr;
}

OdeLimitResult pde_ode_compare(const OdeLimitOptions& opt)
{
    ModelParameters params = ModelParameters::square_domain();
    params.allee = 0.0;
    params.nu_s = params.nu_e = params.nu_i = params.nu_r = opt.nu;

    const OdeState y0{0.9, 0.0, 0.1, 0.0, 0.0};
    OdeLimitResult res;
    res.ode = ode_solve(OdeParameters::from_model(params, opt.population), y0, opt.dt, opt.t_end);

    const Mesh mesh = unit_square_mesh(opt.mesh_n);
    const FeSpace space(mesh);
    ModelProblem prob;
    prob.space = &space;
    prob.params = params;
    const SolverContext ctx(mesh, opt.solver);

    StateFields u(mesh.num_vertices());
    for (int c = 0; c < n_compartments; ++c) std::fill(u[c].begin(), u[c].end(), y0[c] * opt.population);
    const double total = opt.population * mesh.total_measure();

    PicardConfig pc;
    pc.dt = opt.dt;
    pc.tol = opt.picard_tol;
    const int steps = static_cast<int>(std::lround(opt.t_end / opt.dt));
    res.pde.t.push_back(0.0);
    res.pde.y.push_back(y0);
    run_simulation(prob, ctx, u, 0.0, steps, pc, [&](const StepReport& rep, const StateFields&) {
        if (!rep.picard_converged) ++res.picard_failures;
        res.linear_failures += rep.linear_failures;
        OdeState y;
        for (int c = 0; c < n_compartments; ++c) y[c] = rep.integrals[c] / total;
        res.pde.t.push_back(rep.t);
        res.pde.y.push_back(y);
        const OdeState& ref = res.ode.y[rep.step];
        for (int c = 0; c < n_compartments; ++c)
            res.max_discrepancy[c] = std::max(res.max_discrepancy[c], std::abs(y[c] - ref[c]));
    });
    return res;
}

}  // namespace epidd
