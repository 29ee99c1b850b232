#include "epidd/mms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace epidd {

ManufacturedSolution ManufacturedSolution::two_d()
{
    ManufacturedSolution m;
    m.dim = 2;
    return m;
}

namespace {

struct Phase {
    double theta;
    std::array<double, 2> grad;  // gradient of theta
    double grad_sq;
};

Phase phase(int dim, double x, double y, double t)
{
    if (dim == 1) return {10.0 * x + 0.2 * t, {10.0, 0.0}, 100.0};
    return {10.0 * x * y + 0.2 * t, {10.0 * y, 10.0 * x}, 100.0 * (x * x + y * y)};
}

}  // namespace

double ManufacturedSolution::value(int c, double x, double y, double t) const
{
    return amplitude * std::sin(phase(dim, x, y, t).theta) + offsets[c];
}

std::array<double, 2> ManufacturedSolution::gradient(int, double x, double y, double t) const
{
    const Phase ph = phase(dim, x, y, t);
    const double g = amplitude * std::cos(ph.theta);
    return {g * ph.grad[0], g * ph.grad[1]};
}

double ManufacturedSolution::forcing(int c, double x, double y, double t, const ModelParameters& p) const
{
    const Phase ph = phase(dim, x, y, t);
    const double sn = std::sin(ph.theta), cs = std::cos(ph.theta);
    std::array<double, n_compartments> u{};
    double n = 0.0;
    for (int k = 0; k < n_compartments; ++k) {
        u[k] = amplitude * sn + offsets[k];
        n += u[k];
    }
    const double ut = 0.2 * amplitude * cs;
    // grad N = 5 grad u and theta is harmonic, so div(N nu grad u) = nu (5 |grad u|^2 + N lap u).
    const double grad_u_sq = amplitude * amplitude * cs * cs * ph.grad_sq;
    const double lap_u = -amplitude * sn * ph.grad_sq;
    const double nu = p.nu(static_cast<Compartment>(c));
    const double diffusion = nu * (n_compartments * grad_u_sq + n * lap_u);

    const double factor = p.allee != 0.0 ? 1.0 - p.allee / n : 1.0;
    const double bi = p.beta_i(x, y, t), be = p.beta_e(x, y, t);
    const double s = u[0], e = u[1], i = u[2];
    const double infection = factor * (bi * s * i + be * s * e);
    double reaction = 0.0;
    switch (static_cast<Compartment>(c)) {
    case Compartment::s: reaction = -infection; break;
    case Compartment::e: reaction = infection - (p.sigma + p.gamma_e) * e; break;
    case Compartment::i: reaction = p.sigma * e - (p.gamma_r + p.gamma_d) * i; break;
    case Compartment::r: reaction = p.gamma_r * i + p.gamma_e * e; break;
    case Compartment::d: reaction = p.gamma_d * i; break;
    }
    return ut - diffusion - reaction;
}

double ManufacturedSolution::flux(int c, double x, double y, double t, const std::array<double, 2>& normal,
                                  const ModelParameters& p) const
{
    double n = 0.0;
    for (int k = 0; k < n_compartments; ++k) n += value(k, x, y, t);
    const auto g = gradient(c, x, y, t);
    return n * p.nu(static_cast<Compartment>(c)) * (g[0] * normal[0] + g[1] * normal[1]);
}

StateFields ManufacturedSolution::interpolate(const Mesh& mesh, double t) const
{
    StateFields u(mesh.num_vertices());
    for (int c = 0; c < n_compartments; ++c)
        for (Index v = 0; v < mesh.num_vertices(); ++v)
            u[c][v] = value(c, mesh.vertices[v][0], mesh.vertices[v][1], t);
    return u;
}

double ManufacturedSolution::relative_error(const Mesh& mesh, const StateFields& uh, double t) const
{
    // Degree-9 Gauss (1D) and degree-5 seven-point (2D) rules.
    struct QP {
        std::array<double, 3> l;
        double w;
    };
    std::vector<QP> rule;
    if (mesh.dim == 1) {
        const std::array<double, 5> xi{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                       0.9061798459386640};
        const std::array<double, 5> w{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                      0.4786286704993665, 0.2369268850561891};
        for (int q = 0; q < 5; ++q) {
            const double s = 0.5 * (xi[q] + 1.0);
            rule.push_back({{1.0 - s, s, 0.0}, 0.5 * w[q]});
        }
    } else {
        const double a1 = 0.059715871789770, b1 = 0.470142064105115;
        const double a2 = 0.797426985353087, b2 = 0.101286507323456;
        const double w1 = 0.132394152788506, w2 = 0.125939180544827;
        rule = {{{1.0 / 3, 1.0 / 3, 1.0 / 3}, 0.225}, {{a1, b1, b1}, w1}, {{b1, a1, b1}, w1}, {{b1, b1, a1}, w1},
                {{a2, b2, b2}, w2},                   {{b2, a2, b2}, w2}, {{b2, b2, a2}, w2}};
    }
    const int k = mesh.verts_per_cell();
    double total = 0.0;
    for (int c = 0; c < n_compartments; ++c) {
        double err = 0.0, ref = 0.0;
        for (Index cell = 0; cell < mesh.num_cells(); ++cell) {
            const auto& v = mesh.cells[cell];
            const double meas = mesh.cell_measure(cell);
            for (const auto& q : rule) {
                double x = 0.0, y = 0.0, h = 0.0;
                for (int a = 0; a < k; ++a) {
                    x += q.l[a] * mesh.vertices[v[a]][0];
                    y += q.l[a] * mesh.vertices[v[a]][1];
                    h += q.l[a] * uh[c][v[a]];
                }
                const double ex = value(c, x, y, t);
                err += meas * q.w * (ex - h) * (ex - h);
                ref += meas * q.w * ex * ex;
            }
        }
        total += std::sqrt(err) / std::sqrt(ref);
    }
    return total;
}

ModelParameters mms_parameters_1d()
{
    ModelParameters p;
    p.allee = 0.0;
    p.beta_i = constant_function(0.01);
    p.beta_e = constant_function(0.01);
    p.nu_s = p.nu_r = 4.5e-5;
    p.nu_e = 1e-3;
    p.nu_i = 1e-10;
    p.gamma_r = 1.0 / 24.0;
    p.gamma_d = 1.0 / 160.0;
    p.sigma = 1.0 / 8.0;
    p.gamma_e = 1.0 / 6.0;
    return p;
}

ModelParameters mms_parameters_2d()
{
    ModelParameters p = ModelParameters::square_domain();
    p.allee = 100.0;
    return p;
}

double observed_order(double e1, double e2, double ratio)
{
    if (!(e1 > 0.0) || !(e2 > 0.0) || !(ratio > 0.0) || ratio == 1.0) return std::numeric_limits<double>::quiet_NaN();
    return std::log(e1 / e2) / std::log(ratio);
}

ConvergenceResult make_convergence(const std::vector<double>& steps, const std::vector<double>& errors)
{
    ConvergenceResult r;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        ConvergenceRow row{steps[k], errors[k], std::numeric_limits<double>::quiet_NaN()};
        if (k > 0) {
            row.order = observed_order(errors[k - 1], errors[k], steps[k - 1] / steps[k]);
            if (!(errors[k] < errors[k - 1])) r.monotone = false;
        }
        r.rows.push_back(row);
    }
    return r;
}

double mms1d_error(Index cells, double dt, double t_end, const Mms1dOptions& opt)
{
    const Mesh mesh = interval_mesh(cells, 1.0);
    const FeSpace space(mesh);
    const ManufacturedSolution ms = ManufacturedSolution::one_d();

    ModelProblem prob;
    prob.space = &space;
    prob.params = mms_parameters_1d();
    const ModelParameters params = prob.params;
    prob.forcing = Forcing{[ms, params](int c, double x, double y, double t) { return ms.forcing(c, x, y, t, params); },
                           opt.nodal_forcing};
    for (int label : {1, 2}) {
        BoundaryCondition bc;
        bc.kind = BoundaryCondition::Kind::dirichlet;
        bc.label = label;
        bc.value = [ms](int c, double x, double y, double t) { return ms.value(c, x, y, t); };
        prob.bcs.push_back(bc);
    }

    SolverSettings st;
    st.pc = PcKind::ras1;
    st.subdomains = 1;
    st.krylov.rtol = 1e-12;
    const SolverContext ctx(mesh, st);

    PicardConfig pc;
    pc.dt = dt;
    pc.tol = opt.picard_tol;
    pc.max_iters = opt.picard_iters;

    const int steps = static_cast<int>(std::lround(t_end / dt));
    StateFields u = ms.interpolate(mesh, 0.0);
    run_simulation(prob, ctx, u, 0.0, steps, pc);
    return ms.relative_error(mesh, u, steps * dt);
}

ConvergenceResult mms_convergence_spatial_1d(const std::vector<double>& h, double dt, double t_eval,
                                             const Mms1dOptions& opt)
{
    std::vector<double> errors;
    for (double hk : h) errors.push_back(mms1d_error(static_cast<Index>(std::lround(1.0 / hk)), dt, t_eval, opt));
    return make_convergence(h, errors);
}

ConvergenceResult mms_convergence_temporal_1d(const std::vector<double>& dt, double h, double t_eval,
                                              const Mms1dOptions& opt)
{
    std::vector<double> errors;
    const Index cells = static_cast<Index>(std::lround(1.0 / h));
    for (double d : dt) errors.push_back(mms1d_error(cells, d, t_eval, opt));
    return make_convergence(dt, errors);
}

Mms2dTrace mms_run_2d(const Mms2dOptions& opt, const StepObserver& observer)
{
    const Mesh mesh = unit_square_mesh(opt.n);
    const FeSpace space(mesh);
    const ManufacturedSolution ms = ManufacturedSolution::two_d();

    ModelProblem prob;
    prob.space = &space;
    prob.params = mms_parameters_2d();
    const ModelParameters params = prob.params;
    prob.forcing = Forcing{[ms, params](int c, double x, double y, double t) { return ms.forcing(c, x, y, t, params); },
                           true};
    const std::array<std::pair<int, std::array<double, 2>>, 4> sides{
        {{1, {-1.0, 0.0}}, {2, {1.0, 0.0}}, {3, {0.0, 1.0}}, {4, {0.0, -1.0}}}};
    for (const auto& [label, normal] : sides) {
        BoundaryCondition bc;
        bc.kind = BoundaryCondition::Kind::neumann;
        bc.label = label;
        bc.value = [ms, params, normal](int c, double x, double y, double t) {
            return ms.flux(c, x, y, t, normal, params);
        };
        prob.bcs.push_back(bc);
    }

    SolverSettings st;
    st.pc = PcKind::ras1;
    st.subdomains = opt.subdomains;
    const SolverContext ctx(mesh, st);
    PicardConfig pc;
    pc.dt = opt.dt;
    pc.tol = opt.picard_tol;

    Mms2dTrace trace;
    StateFields u = ms.interpolate(mesh, 0.0);
    trace.t.push_back(0.0);
    trace.error.push_back(ms.relative_error(mesh, u, 0.0));
    run_simulation(prob, ctx, u, 0.0, opt.steps, pc, [&](const StepReport& rep, const StateFields& state) {
        if (!rep.picard_converged) ++trace.picard_failures;
        trace.linear_failures += rep.linear_failures;
        if (rep.step % opt.record_every == 0 || rep.step == opt.steps) {
            trace.t.push_back(rep.t);
            trace.error.push_back(ms.relative_error(mesh, state, rep.t));
        }
        if (observer) observer(rep, state);
    });
    return trace;
}

}  // namespace epidd
