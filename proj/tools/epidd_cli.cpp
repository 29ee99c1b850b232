// Command-line front end: simulate, verify <case>, bench.

#include "epidd/bench_harness.hpp"
#include "epidd/config.hpp"
#include "epidd/mesh.hpp"
#include "epidd/output.hpp"
#include "epidd/parallel.hpp"
#include "epidd/scenario.hpp"
#include "epidd/verify_cases.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int exit_fail = 1;
constexpr int exit_usage = 2;
constexpr int exit_solver = 3;

struct SolverFlags {
    std::string config;
    std::optional<std::string> pc;
    std::optional<int> subdomains;
    std::optional<int> overlap;
    std::optional<double> dt;
    std::optional<int> steps;
    std::optional<double> amg_theta;
    std::optional<int> amg_max_levels;
    std::optional<int> amg_coarse_size;
    std::optional<std::string> out_dir;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f)
{
    cmd->add_option("--config", f.config, "Scenario file (key = value)")->check(CLI::ExistingFile);
    cmd->add_option("--pc", f.pc, "Preconditioner: none, asm, ras1, ras2, ras2-v2, ras2-v3");
    cmd->add_option("--subdomains", f.subdomains, "Number of subdomains")->check(CLI::PositiveNumber);
    cmd->add_option("--overlap", f.overlap, "Overlap layers")->check(CLI::NonNegativeNumber);
    cmd->add_option("--dt", f.dt, "Time step in days")->check(CLI::PositiveNumber);
    cmd->add_option("--steps", f.steps, "Number of time steps")->check(CLI::PositiveNumber);
    cmd->add_option("--amg-theta", f.amg_theta, "AMG strength threshold");
    cmd->add_option("--amg-max-levels", f.amg_max_levels, "AMG level cap");
    cmd->add_option("--amg-coarse-size", f.amg_coarse_size, "AMG coarsest size");
    cmd->add_option("--out-dir", f.out_dir, "Output directory");
}

epidd::Scenario load_scenario(const SolverFlags& f)
{
    epidd::Config cfg;
    if (!f.config.empty()) cfg = epidd::Config::load(f.config);
    if (f.pc) cfg.set("solver.pc", *f.pc);
    if (f.subdomains) cfg.set("solver.subdomains", std::to_string(*f.subdomains));
    if (f.overlap) cfg.set("solver.overlap", std::to_string(*f.overlap));
    if (f.steps) cfg.set("time.steps", std::to_string(*f.steps));
    if (f.amg_max_levels) cfg.set("amg.max_levels", std::to_string(*f.amg_max_levels));
    if (f.amg_coarse_size) cfg.set("amg.coarse_size", std::to_string(*f.amg_coarse_size));
    if (f.out_dir) cfg.set("output.dir", *f.out_dir);
    auto set_double = [&](const char* key, const std::optional<double>& v) {
        if (!v) return;
        std::ostringstream s;
        s << std::setprecision(17) << *v;
        cfg.set(key, s.str());
    };
    set_double("time.dt", f.dt);
    set_double("amg.theta", f.amg_theta);
    return epidd::scenario_from_config(cfg);
}

int run_simulate(const SolverFlags& f)
{
    const epidd::Scenario sc = load_scenario(f);
    const epidd::Discretization disc = epidd::build_mesh(sc.mesh);
    std::cout << "scenario " << sc.name << ": " << disc.mesh.num_vertices() << " vertices, "
              << 5 * disc.mesh.num_vertices() << " unknowns, pc " << epidd::to_string(sc.solver.pc) << ", "
              << sc.solver.subdomains << " subdomains, " << sc.steps << " steps of " << sc.picard.dt << " days\n";

    std::ofstream ts;
    if (sc.output.timeseries) {
        ts = epidd::open_output(sc.output.dir, "timeseries.csv");
        epidd::write_timeseries_header(ts);
    }
    if (sc.output.vtk_every > 0) {
        epidd::open_output(sc.output.dir, epidd::vtk_filename(0)).close();
        epidd::write_vtk_file(sc.output.dir + "/" + epidd::vtk_filename(0), disc.mesh,
                              epidd::initial_state(sc.ic, disc.mesh));
    }
    int failures = 0;
    const auto observer = [&](const epidd::StepReport& r, const epidd::StateFields& u) {
        if (ts.is_open()) {
            epidd::write_timeseries_row(ts, epidd::to_row(r));
            ts.flush();
        }
        if (sc.output.vtk_every > 0 && r.step % sc.output.vtk_every == 0)
            epidd::write_vtk_file(sc.output.dir + "/" + epidd::vtk_filename(r.step), disc.mesh, u);
        std::cout << "step " << std::setw(5) << r.step << "  t=" << std::setw(8) << r.t << "  picard "
                  << r.picard_iterations << "  krylov " << r.krylov_sum << "  drift " << std::setprecision(3)
                  << r.drift << std::setprecision(6) << '\n';
        if (!r.picard_converged) {
            ++failures;
            std::cerr << "error: Picard iteration did not converge at step " << r.step << " (last eps "
                      << (r.picard_eps.empty() ? NAN : r.picard_eps.back()) << ")\n";
        }
        if (r.linear_failures > 0) {
            ++failures;
            std::cerr << "error: " << r.linear_failures << " Krylov solves failed at step " << r.step
                      << "; try a stronger preconditioner (--pc ras2-v3) or a smaller --dt\n";
        }
        if (r.negativity_warning) std::cerr << "warning: negative densities at step " << r.step << '\n';
    };
    epidd::run_scenario(sc, disc, observer);
    return failures > 0 ? exit_solver : 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spatial SEIRD epidemic solver with overlapping Schwarz preconditioners"};
    app.require_subcommand(1);
    int threads = 0;
    bool deterministic = false;
    app.add_option("--threads", threads, "OpenMP threads (default: runtime setting)")->check(CLI::PositiveNumber);
    app.add_flag("--deterministic", deterministic, "Thread-count independent reductions");

    SolverFlags sim;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario and write timeseries.csv / fields_<step>.vtk");
    add_solver_flags(simulate, sim);

    auto* verify = app.add_subcommand("verify", "Verification cases");
    verify->require_subcommand(1);
    std::string verify_dir = ".";
    epidd::Mms2dOptions mms2d;
    double mms2d_t_end = 50.0;
    std::vector<double> populations{10.0, 1000.0};
    auto* v_space = verify->add_subcommand("mms1d-space", "1D spatial convergence study");
    auto* v_time = verify->add_subcommand("mms1d-time", "1D temporal convergence study");
    auto* v_2d = verify->add_subcommand("mms2d", "2D manufactured solution error trace");
    v_2d->add_option("--mesh-n", mms2d.n, "Cells per side")->check(CLI::PositiveNumber);
    v_2d->add_option("--dt", mms2d.dt, "Time step")->check(CLI::PositiveNumber);
    v_2d->add_option("--t-end", mms2d_t_end, "Final time in days")->check(CLI::PositiveNumber);
    v_2d->add_option("--subdomains", mms2d.subdomains, "RAS subdomains")->check(CLI::PositiveNumber);
    auto* v_ode = verify->add_subcommand("ode-limit", "PDE with negligible diffusion against the ODE oracle");
    v_ode->add_option("--populations", populations, "Total populations")->delimiter(',');
    for (auto* c : {v_space, v_time, v_2d, v_ode}) c->add_option("--out-dir", verify_dir, "Directory for verify_<case>.csv");

    SolverFlags bf;
    epidd::BenchPlan plan;
    std::vector<int> bench_threads{1};
    auto* bench = app.add_subcommand("bench", "Scaling benchmark writing bench.csv");
    add_solver_flags(bench, bf);
    bench->add_option("--mode", plan.mode, "strong or weak")->check(CLI::IsMember({"strong", "weak"}));
    bench->add_option("--threads", bench_threads, "Thread counts")->delimiter(',');
    bench->add_option("--mesh-sizes", plan.mesh_sizes, "Fine cells per side")->delimiter(',');
    bench->add_option("--repetitions", plan.repetitions, "Repetitions per configuration")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_usage;
    }

    if (threads > 0) epidd::par::set_threads(threads);
    epidd::par::set_deterministic(deterministic);
    try {
        if (*simulate) return run_simulate(sim);
        if (*verify) {
            epidd::VerifyOutcome v;
            if (*v_space) v = epidd::verify_mms1d_space(verify_dir, std::cout);
            if (*v_time) v = epidd::verify_mms1d_time(verify_dir, std::cout);
            if (*v_2d) {
                mms2d.steps = static_cast<int>(std::lround(mms2d_t_end / mms2d.dt));
                mms2d.record_every = std::max(1, mms2d.steps / 500);
                v = epidd::verify_mms2d(mms2d, verify_dir, std::cout);
            }
            if (*v_ode) v = epidd::verify_ode_limit(populations, verify_dir, std::cout);
            return v.pass ? 0 : exit_fail;
        }
        if (*bench) {
            if (!bf.steps) bf.steps = plan.steps;
            const epidd::Scenario sc = load_scenario(bf);
            plan.steps = sc.steps;
            plan.threads = bench_threads;
            if (deterministic) epidd::par::set_deterministic(true);
            const auto rows = epidd::bench_run(plan, sc);
            auto csv = epidd::open_output(sc.output.dir, "bench.csv");
            epidd::write_bench_header(csv);
            epidd::write_bench_header(std::cout);
            bool failed = false;
            for (const auto& r : rows) {
                epidd::write_bench_row(csv, r);
                epidd::write_bench_row(std::cout, r);
                failed = failed || r.failed;
            }
            if (failed) std::cerr << "error: at least one benchmark configuration failed (failed = 1 rows)\n";
            return failed ? exit_solver : 0;
        }
    } catch (const epidd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const epidd::MeshError& e) {
        std::cerr << "mesh error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_solver;
    }
    return 0;
}
