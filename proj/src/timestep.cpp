#include "epidd/timestep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace epidd {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void PicardConfig::validate() const
{
    if (!(tol > 0.0)) throw std::invalid_argument("Picard tolerance must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (max_iters < 1) throw std::invalid_argument("Picard iteration cap must be >= 1");
}

SolverContext::SolverContext(const Mesh& mesh, const SolverSettings& settings, const NestedMeshPair* pair)
    : settings_(settings)
{
    settings_.krylov.validate();
    if (settings.subdomains < 1) throw std::invalid_argument("subdomain count must be >= 1");
    if (settings.overlap < 0) throw std::invalid_argument("overlap must be >= 0");
    fine_ = add_overlap(partition(mesh, settings.subdomains), mesh, settings.overlap);
    if (is_two_grid(settings.pc)) {
        if (!pair) throw std::invalid_argument("preconditioner " + to_string(settings.pc) + " needs a nested coarse mesh");
        if (pair->fine.num_vertices() != mesh.num_vertices())
            throw std::invalid_argument("nested mesh pair does not match the simulation mesh");
        coarse_space_ = build_coarse_space(*pair);
        const int nsub_c = std::min(settings.subdomains, static_cast<int>(pair->coarse.num_vertices()));
        coarse_ = add_overlap(partition(pair->coarse, nsub_c), pair->coarse, settings.overlap);
    }
}

PcContext SolverContext::pc_context() const
{
    PcContext c;
    c.fine = &fine_;
    c.coarse = coarse_space_ ? &coarse_ : nullptr;
    c.coarse_space = coarse_space_ ? &*coarse_space_ : nullptr;
    c.krylov = settings_.krylov;
    c.amg = settings_.amg;
    return c;
}

std::array<double, n_compartments> integrate_state(const StateFields& u, const Mesh& mesh)
{
    std::array<double, n_compartments> out{};
    for (int c = 0; c < n_compartments; ++c) out[c] = integrate_field(u[c], mesh);
    return out;
}

StateFields picard_step(const ModelProblem& problem, const SolverContext& ctx, const StateFields& un, double t_new,
                        const PicardConfig& cfg, StepReport& report)
{
    cfg.validate();
    const FeSpace& space = *problem.space;
    const SolverSettings& st = ctx.settings();
    const PcContext pcc = ctx.pc_context();
    const double un_norm = un.stacked_norm();

    StateFields uk = un;
    report.t = t_new;
    report.picard_converged = false;
    AssemblyDiagnostics diag;

    for (int it = 0; it < cfg.max_iters; ++it) {
        StateFields sweep = uk;
        for (int c = 0; c < n_compartments; ++c) {
            AssemblyInput in;
            in.c = static_cast<Compartment>(c);
            in.params = &problem.params;
            in.prev_time = &un;
            in.prev_iter = &uk;
            in.sweep = &sweep;
            in.t = t_new;
            in.dt = cfg.dt;
            in.forcing = problem.forcing ? &*problem.forcing : nullptr;
            in.bcs = &problem.bcs;

            auto t0 = std::chrono::steady_clock::now();
            LinearSystem sys = assemble_compartment(space, in, &diag);
            report.assembly_seconds += seconds_since(t0);

            t0 = std::chrono::steady_clock::now();
            auto pc = make_preconditioner(st.pc, sys.a, pcc);
            report.pc_setup_seconds += seconds_since(t0);

            Vector x = cfg.warm_start ? uk[c] : Vector(sys.b.size(), 0.0);
            t0 = std::chrono::steady_clock::now();
            const LinearOperator op = as_operator(sys.a);
            const KrylovReport kr = pc->flexible() ? fgmres(op, sys.b, pc->as_operator(), st.krylov, x)
                                                   : gmres(op, sys.b, st.pc == PcKind::none ? LinearOperator{}
                                                                                              : pc->as_operator(),
                                                           st.krylov, x);
            report.solve_seconds += seconds_since(t0);
            report.krylov[c] += kr.iterations;
            if (!kr.converged) ++report.linear_failures;
            if (const auto* cc = pc->coarse()) {
                const auto& s = cc->stats();
                report.coarse_inner_iterations.insert(report.coarse_inner_iterations.end(), s.inner_iterations.begin(),
                                                      s.inner_iterations.end());
                report.coarse_not_converged += s.not_converged;
            }
            sweep[c] = std::move(x);
        }
        const double eps = un_norm > 0.0 ? stacked_distance(sweep, uk) / un_norm : stacked_distance(sweep, uk);
        report.picard_eps.push_back(eps);
        uk = std::move(sweep);
        report.picard_iterations = it + 1;
        if (!uk.all_finite()) throw std::runtime_error("non-finite state after Picard iteration " + std::to_string(it + 1));
        if (eps < cfg.tol) {
            report.picard_converged = true;
            break;
        }
    }

    report.krylov_sum = 0;
    for (int k : report.krylov) report.krylov_sum += k;
    report.allee_clamps = diag.allee_clamps;

    const Mesh& mesh = space.mesh();
    const auto before = integrate_state(un, mesh);
    report.integrals = integrate_state(uk, mesh);
    double n0 = 0.0, n1 = 0.0;
    for (int c = 0; c < n_compartments; ++c) {
        n0 += before[c];
        n1 += report.integrals[c];
    }
    report.drift = n0 != 0.0 ? (n1 - n0) / n0 : n1;

    const Vector ntot = uk.total();
    const double nmax = ntot.empty() ? 0.0 : *std::max_element(ntot.begin(), ntot.end());
    for (int c = 0; c < n_compartments && !report.negativity_warning; ++c)
        for (double v : uk[c])
            if (v < -1e-8 * nmax) {
                report.negativity_warning = true;
                break;
            }
    return uk;
}

std::vector<StepReport> run_simulation(const ModelProblem& problem, const SolverContext& ctx, StateFields& state,
                                       double t0, int steps, const PicardConfig& cfg, const StepObserver& observer)
{
    problem.params.validate();
    std::vector<StepReport> reports;
    reports.reserve(steps);
    for (int n = 0; n < steps; ++n) {
        StepReport rep;
        rep.step = n + 1;
        const double t_new = t0 + (n + 1) * cfg.dt;
        state = picard_step(problem, ctx, state, t_new, cfg, rep);
        if (observer) observer(rep, state);
        reports.push_back(std::move(rep));
    }
    return reports;
}

}  // namespace epidd
