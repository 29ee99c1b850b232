#include "epidd/bench_harness.hpp"

#include "epidd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epidd {

void BenchPlan::validate() const
{
    if (mode != "strong" && mode != "weak") throw std::invalid_argument("bench mode must be 'strong' or 'weak'");
    if (threads.empty()) throw std::invalid_argument("bench needs at least one thread count");
    if (mesh_sizes.empty()) throw std::invalid_argument("bench needs at least one mesh size");
    for (int t : threads)
        if (t < 1) throw std::invalid_argument("thread counts must be >= 1");
    for (Index n : mesh_sizes)
        if (n < 2) throw std::invalid_argument("mesh sizes must be >= 2");
    if (mode == "weak" && mesh_sizes.size() > 1 && mesh_sizes.size() != threads.size())
        throw std::invalid_argument("weak mode needs one mesh size per thread count");
    if (steps < 1 || repetitions < 1) throw std::invalid_argument("steps and repetitions must be >= 1");
}

namespace {

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Index mesh_size_for(const BenchPlan& plan, std::size_t k)
{
    if (plan.mode == "strong") return plan.mesh_sizes.front();
    if (plan.mesh_sizes.size() > 1) return plan.mesh_sizes[k];
    const double scale = std::sqrt(static_cast<double>(plan.threads[k]) / plan.threads.front());
    return static_cast<Index>(std::lround(plan.mesh_sizes.front() * scale));
}

}  // namespace

std::vector<BenchRow> bench_run(const BenchPlan& plan, const Scenario& scenario)
{
    plan.validate();
    const int saved_threads = par::max_threads();
    std::vector<BenchRow> rows;
    for (std::size_t k = 0; k < plan.threads.size(); ++k) {
        Scenario sc = scenario;
        sc.steps = plan.steps;
        const Index n = mesh_size_for(plan, k);
        if (sc.mesh.source == "square" || sc.mesh.source == "rectangle") {
            const Index base = std::max<Index>(1, n >> sc.mesh.refine);
            sc.mesh.nx = base;
            sc.mesh.ny = sc.mesh.source == "square" ? base : std::max<Index>(1, base * scenario.mesh.ny / scenario.mesh.nx);
        }
        BenchRow row;
        row.mode = plan.mode;
        row.threads = plan.threads[k];
        row.pc = to_string(sc.solver.pc);
        row.subdomains = sc.solver.subdomains;
        par::set_threads(row.threads);

        std::vector<double> setup, solve, picard, krylov;
        try {
            const Discretization disc = build_mesh(sc.mesh);
            row.vertices = disc.mesh.num_vertices();
            for (int rep = 0; rep < plan.repetitions; ++rep) {
                const SimulationResult res = run_scenario(sc, disc);
                double s = 0.0, v = 0.0, pi = 0.0, kr = 0.0;
                for (const auto& r : res.reports) {
                    s += r.pc_setup_seconds;
                    v += r.solve_seconds;
                    pi += r.picard_iterations;
                    kr += r.krylov_sum;
                    if (!r.picard_converged || r.linear_failures > 0) row.failed = true;
                }
                const double steps = static_cast<double>(res.reports.size());
                setup.push_back(s);
                solve.push_back(v);
                picard.push_back(pi / steps);
                krylov.push_back(kr / steps);
            }
            row.setup_s = median(setup);
            row.solve_s = median(solve);
            row.avg_picard = median(picard);
            row.avg_krylov = median(krylov);
        } catch (const std::exception&) {
            row.failed = true;
        }
        rows.push_back(row);
    }
    par::set_threads(saved_threads);
    return rows;
}

}  // namespace epidd
