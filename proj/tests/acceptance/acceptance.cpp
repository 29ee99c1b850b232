// Acceptance criteria. Usage: acceptance <1..11 | all>. Prints one PASS/FAIL
// line per criterion; exit code 0 pass, 1 fail, 77 skipped.

#include "epidd/decomp.hpp"
#include "epidd/krylov.hpp"
#include "epidd/mms.hpp"
#include "epidd/ode.hpp"
#include "epidd/parallel.hpp"
#include "epidd/scenario.hpp"
#include "epidd/schwarz.hpp"
#include "epidd/verify_cases.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace epidd;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
    Verdict verdict;
    std::string detail;
};

Outcome ok(bool pass, const std::string& detail) { return {pass ? Verdict::pass : Verdict::fail, detail}; }

// Tolerances pinned from the criteria.
constexpr double c3_tol = 1e-3;
constexpr double c4_drift = 1e-8;
constexpr double c4_krylov_rtol = 1e-10;
constexpr double c5_tol = 1e-12;
constexpr int c7_min_ratio = 5;
constexpr int c7_max_picard = 8;
constexpr double c8_max_spread = 2.0;
constexpr double c9_v3_median = 15.0;
constexpr double c10_tol = 1e-10;
constexpr double c11_time_ratio = 0.6;

// Desk-scale step of the square scenario: 200x200 fine mesh nested in 100x100.
// dt is not fixed by the scenario description; one day gives diffusion enough
// weight relative to the mass term for the one-level/two-grid gap to show.
StepReport square_step(PcKind pc, int subdomains)
{
    Scenario sc = square_scenario();
    sc.mesh.nx = sc.mesh.ny = 100;
    sc.solver.pc = pc;
    sc.solver.subdomains = subdomains;
    sc.picard.dt = 1.0;
    sc.steps = 1;
    const Discretization disc = build_mesh(sc.mesh);
    return run_scenario(sc, disc).reports.front();
}

double median(std::vector<int> v)
{
    if (v.empty()) return NAN;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

Outcome c1()
{
    std::ostringstream log;
    const ReferenceTable ref = spatial_reference();
    const auto res = mms_convergence_spatial_1d(ref.steps);
    const auto v = judge_convergence(res, ref, mms_error_rel_tol, 2.0, mms_order_tol);
    return ok(v.pass, "errors " + fmt(res.rows[0].error) + " / " + fmt(res.rows[1].error) + " / " +
                          fmt(res.rows[2].error) + ", orders " + fmt(res.rows[1].order) + " / " +
                          fmt(res.rows[2].order) + "; " + v.summary);
}

Outcome c2()
{
    const ReferenceTable ref = temporal_reference();
    const auto res = mms_convergence_temporal_1d(ref.steps);
    const auto v = judge_convergence(res, ref, mms_error_rel_tol, 1.0, mms_order_tol);
    return ok(v.pass, "errors " + fmt(res.rows[0].error) + " / " + fmt(res.rows[1].error) + " / " +
                          fmt(res.rows[2].error) + ", orders " + fmt(res.rows[1].order) + " / " +
                          fmt(res.rows[2].order) + "; " + v.summary);
}

Outcome c3()
{
    bool pass = true;
    std::string detail;
    for (double pop : {10.0, 1000.0}) {
        OdeLimitOptions opt;
        opt.population = pop;
        const auto res = pde_ode_compare(opt);
        const double worst = *std::max_element(res.max_discrepancy.begin(), res.max_discrepancy.end());
        pass = pass && worst <= c3_tol && res.picard_failures == 0 && res.linear_failures == 0;
        detail += "N0=" + fmt(pop) + ": max " + fmt(worst) + "; ";
    }
    return ok(pass, detail + "bound " + fmt(c3_tol));
}

double cumulative_drift(double krylov_rtol, double& worst_step)
{
    Scenario sc = square_scenario();
    sc.steps = 100;
    sc.solver.krylov.rtol = krylov_rtol;
    const Discretization disc = build_mesh(sc.mesh);
    const auto res = run_scenario(sc, disc);
    double n0 = 0.0, n1 = 0.0;
    for (int c = 0; c < n_compartments; ++c) {
        n0 += res.initial_integrals[c];
        n1 += res.reports.back().integrals[c];
    }
    worst_step = 0.0;
    for (const auto& r : res.reports) worst_step = std::max(worst_step, std::abs(r.drift));
    return std::abs(n1 - n0) / n0;
}

// Judged with linear solves tight enough that only the scheme is measured;
// the default-tolerance drift is reported alongside.
Outcome c4()
{
    double step_tight = 0.0, step_default = 0.0;
    const double tight = cumulative_drift(c4_krylov_rtol, step_tight);
    const double loose = cumulative_drift(KrylovConfig{}.rtol, step_default);
    return ok(tight <= c4_drift, "cumulative drift " + fmt(tight) + " (worst step " + fmt(step_tight) +
                                     ") at Krylov rtol " + fmt(c4_krylov_rtol) + "; " + fmt(loose) +
                                     " at the default rtol " + fmt(KrylovConfig{}.rtol));
}

// Dense RAS operator sum_i R_i^T D_i A_i^-1 R_i.
Eigen::MatrixXd dense_ras(const Eigen::MatrixXd& a, const Decomposition& d)
{
    const Index n = static_cast<Index>(a.rows());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int s = 0; s < d.n_sub; ++s) {
        const auto& idx = d.subdomain_dofs[s];
        const Index k = static_cast<Index>(idx.size());
        Eigen::MatrixXd ai(k, k);
        for (Index p = 0; p < k; ++p)
            for (Index q = 0; q < k; ++q) ai(p, q) = a(idx[p], idx[q]);
        const Eigen::MatrixXd inv = ai.inverse();
        for (Index p = 0; p < k; ++p) {
            if (d.owner[idx[p]] != s) continue;
            for (Index q = 0; q < k; ++q) m(idx[p], idx[q]) += inv(p, q);
        }
    }
    return m;
}

Outcome c5()
{
    std::mt19937 rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Index nx = std::uniform_int_distribution<Index>(4, 13)(rng);
        const Index ny = std::uniform_int_distribution<Index>(3, 13)(rng);
        const Mesh mesh = rectangle_mesh(nx, ny, 1.0, 1.0);
        const Index n = mesh.num_vertices();
        if (n > 200) continue;
        // Random diagonally dominant matrix on the mesh graph.
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const auto adj = vertex_adjacency(mesh);
        std::vector<Triplet> t;
        for (Index i = 0; i < n; ++i) {
            double row = 0.0;
            for (Index j : adj[i]) {
                const double v = u(rng);
                t.push_back({i, j, v});
                row += std::abs(v);
            }
            t.push_back({i, i, row + 0.5 + std::abs(u(rng))});
        }
        const CsrMatrix a = CsrMatrix::from_triplets(n, n, t);
        const int n_sub = std::uniform_int_distribution<int>(2, 6)(rng);
        const Decomposition d = add_overlap(partition(mesh, n_sub), mesh, 1);
        const Index nc = std::uniform_int_distribution<Index>(5, std::min<Index>(40, n / 2))(rng);
        std::vector<Triplet> zt;
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < nc; ++j)
                if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.3) zt.push_back({i, j, u(rng)});
        for (Index j = 0; j < nc; ++j) zt.push_back({j, j, 1.0});
        CoarseSpace cs;
        cs.z = CsrMatrix::from_triplets(n, nc, zt);
        cs.r0 = transpose(cs.z);

        const OneLevelSchwarz ras(a, d, SchwarzVariant::ras);
        const CoarseCorrection q(a, cs, CoarseOptions{});
        const LinearOperator m_op = [&](const Vector& r, Vector& z) { ras.apply(r, z); };
        const LinearOperator q_op = [&](const Vector& r, Vector& z) { q.apply(r, z); };

        const Eigen::MatrixXd ad = Eigen::Map<const Eigen::MatrixXd>(a.to_dense().data(), n, n).transpose();
        const Eigen::MatrixXd zd = Eigen::Map<const Eigen::MatrixXd>(cs.z.to_dense().data(), nc, n).transpose();
        const Eigen::MatrixXd p1 = dense_ras(ad, d);
        const Eigen::MatrixXd p2 = zd * (zd.transpose() * ad * zd).inverse() * zd.transpose();
        const Eigen::MatrixXd p3 = p1;
        const Eigen::MatrixXd pm =
            p1 + p2 + p3 - p2 * ad * p1 - p3 * ad * p1 - p3 * ad * p2 + p3 * ad * p2 * ad * p1;

        Vector r(n);
        for (double& v : r) v = u(rng);
        Vector z(n);
        apply_two_grid(m_op, q_op, a, r, z);
        const Eigen::VectorXd ref = pm * Eigen::Map<const Eigen::VectorXd>(r.data(), n);
        const Eigen::VectorXd got = Eigen::Map<const Eigen::VectorXd>(z.data(), n);
        worst = std::max(worst, (got - ref).norm() / ref.norm());
    }
    return ok(worst <= c5_tol, "worst relative difference " + fmt(worst));
}

Outcome c6()
{
    std::mt19937 rng(7);
    int exact = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const Index nx = std::uniform_int_distribution<Index>(2, 30)(rng);
        const Index ny = std::uniform_int_distribution<Index>(1, 30)(rng);
        const Mesh mesh = rectangle_mesh(nx, ny, std::uniform_real_distribution<double>(0.5, 3.0)(rng), 1.0);
        const int n_sub = std::uniform_int_distribution<int>(1, std::min<int>(16, mesh.num_vertices()))(rng);
        const int layers = std::uniform_int_distribution<int>(0, 3)(rng);
        const Decomposition d = add_overlap(partition(mesh, n_sub), mesh, layers);
        const Restrictions rs = build_restrictions(d, mesh.num_vertices());
        const Index n = mesh.num_vertices();
        CsrMatrix sum = CsrMatrix::from_triplets(n, n, {});
        for (int s = 0; s < d.n_sub; ++s) {
            std::vector<Triplet> dt;
            for (std::size_t k = 0; k < rs.d[s].size(); ++k)
                dt.push_back({static_cast<Index>(k), static_cast<Index>(k), rs.d[s][k]});
            const Index ns = static_cast<Index>(rs.d[s].size());
            const CsrMatrix di = CsrMatrix::from_triplets(ns, ns, dt);
            sum = add(sum, multiply(transpose(rs.r[s]), multiply(di, rs.r[s])), 1.0, 1.0);
        }
        bool identity = true;
        for (Index i = 0; i < n && identity; ++i)
            for (Index j = 0; j < n && identity; ++j) identity = sum.at(i, j) == (i == j ? 1.0 : 0.0);
        exact += identity;
    }
    return ok(exact == 50, std::to_string(exact) + "/50 decompositions give the identity exactly");
}

Outcome c7()
{
    const StepReport one = square_step(PcKind::ras1, 16);
    const StepReport two = square_step(PcKind::ras2_v3, 16);
    const bool pass = two.krylov_sum * c7_min_ratio <= one.krylov_sum && two.picard_iterations <= c7_max_picard &&
                      one.picard_iterations <= c7_max_picard && one.linear_failures == 0 && two.linear_failures == 0;
    return ok(pass, "one-level " + std::to_string(one.krylov_sum) + ", two-grid V3 " +
                        std::to_string(two.krylov_sum) + " (ratio " +
                        fmt(static_cast<double>(one.krylov_sum) / two.krylov_sum) + "), Picard " +
                        std::to_string(one.picard_iterations) + " / " + std::to_string(two.picard_iterations));
}

Outcome c8()
{
    std::vector<int> v3, ras;
    std::string detail;
    for (int s : {4, 16, 64}) {
        v3.push_back(square_step(PcKind::ras2_v3, s).krylov_sum);
        ras.push_back(square_step(PcKind::ras1, s).krylov_sum);
        detail += std::to_string(s) + ": V3 " + std::to_string(v3.back()) + ", RAS " + std::to_string(ras.back()) + "; ";
    }
    const double spread = static_cast<double>(*std::max_element(v3.begin(), v3.end())) /
                          *std::min_element(v3.begin(), v3.end());
    const bool pass = spread < c8_max_spread && ras[0] < ras[1] && ras[1] < ras[2];
    return ok(pass, detail + "V3 spread " + fmt(spread));
}

Outcome c9()
{
    const StepReport v2 = square_step(PcKind::ras2_v2, 16);
    const StepReport v3 = square_step(PcKind::ras2_v3, 16);
    const double m2 = median(v2.coarse_inner_iterations);
    const double m3 = median(v3.coarse_inner_iterations);
    return ok(m3 <= m2 && m3 <= c9_v3_median,
              "median inner iterations per coarse solve: V2 " + fmt(m2) + ", V3 " + fmt(m3));
}

Outcome c10()
{
    // Synthetic residual sequences against the stopping rule.
    KrylovConfig cfg;
    cfg.rtol = 1e-5;
    cfg.atol = 1e-50;
    cfg.dtol = 1e5;
    bool rules = classify_residual(0.99e-5, 1.0, cfg) == KrylovStatus::converged &&
                 classify_residual(1e-5, 1.0, cfg) == KrylovStatus::running &&
                 classify_residual(1.01e5, 1.0, cfg) == KrylovStatus::diverged &&
                 classify_residual(1e5, 1.0, cfg) == KrylovStatus::running;
    cfg.atol = 1e-3;
    rules = rules && classify_residual(0.9e-3, 1.0, cfg) == KrylovStatus::converged &&
            classify_residual(1.1e-3, 1.0, cfg) == KrylovStatus::running;

    // Reported vs recomputed residuals over Schwarz-preconditioned solves.
    double worst = 0.0;
    int solves = 0;
    std::mt19937 rng(11);
    for (PcKind kind : {PcKind::none, PcKind::asm_, PcKind::ras1, PcKind::ras2, PcKind::ras2_v2, PcKind::ras2_v3}) {
        const Mesh coarse = unit_square_mesh(12);
        const NestedMeshPair pair = refine_uniform(coarse);
        const FeSpace space(pair.fine);
        const CsrMatrix k = space.stiffness_matrix();
        const CsrMatrix a = add(space.mass_matrix(), k, 1.0, 1e-2);
        const Decomposition fine = add_overlap(partition(pair.fine, 8), pair.fine, 1);
        const Decomposition cd = add_overlap(partition(coarse, 4), coarse, 1);
        const CoarseSpace cs = build_coarse_space(pair);
        PcContext ctx{&fine, &cd, &cs, KrylovConfig{}, AmgConfig{}};
        const auto pc = make_preconditioner(kind, a, ctx);
        for (double rtol : {1e-5, 1e-10}) {
            Vector b(a.n_rows);
            for (double& v : b) v = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
            KrylovConfig kc;
            kc.rtol = rtol;
            Vector x(b.size(), 0.0);
            const auto rep = pc->flexible() ? fgmres(as_operator(a), b, pc->as_operator(), kc, x)
                                            : gmres(as_operator(a), b, pc->as_operator(), kc, x);
            Vector r(b.size());
            const Vector ax = spmv(a, x);
            for (std::size_t i = 0; i < b.size(); ++i) r[i] = b[i] - ax[i];
            double rn = 0.0, bn = 0.0;
            for (std::size_t i = 0; i < b.size(); ++i) {
                rn += r[i] * r[i];
                bn += b[i] * b[i];
            }
            rn = std::sqrt(rn);
            bn = std::sqrt(bn);
            worst = std::max(worst, std::abs(rep.residual_history.back() - rn) / bn);
            worst = std::max(worst, std::abs(rep.final_residual_norm - rn) / bn);
            rules = rules && rep.converged && rn < rtol * bn * (1.0 + 1e-8);
            ++solves;
        }
    }
    return ok(rules && worst <= c10_tol, std::to_string(solves) + " solves, worst reported/true residual gap " +
                                             fmt(worst) + " of ||b||; stopping rules " + (rules ? "exact" : "broken"));
}

Outcome c11()
{
    Scenario sc = square_scenario();
    sc.mesh.nx = sc.mesh.ny = 45;  // 91x91 fine mesh, 41405 unknowns
    sc.solver.subdomains = 16;
    sc.steps = 2;
    const Discretization disc = build_mesh(sc.mesh);
    const bool saved_det = par::deterministic();
    const int saved_threads = par::max_threads();
    par::set_deterministic(true);
    std::map<int, std::pair<double, std::vector<int>>> runs;
    for (int threads : {1, 4}) {
        par::set_threads(threads);
        const auto res = run_scenario(sc, disc);
        double solve = 0.0;
        std::vector<int> counts;
        for (const auto& r : res.reports) {
            solve += r.solve_seconds;
            counts.push_back(r.picard_iterations);
            counts.push_back(r.krylov_sum);
        }
        runs[threads] = {solve, counts};
    }
    par::set_threads(saved_threads);
    par::set_deterministic(saved_det);
    const bool same = runs[1].second == runs[4].second;
    const double ratio = runs[4].first / runs[1].first;
    const std::string detail = "iterations " + std::string(same ? "identical" : "differ") + ", solve time ratio 4/1 = " +
                               fmt(ratio) + " (bound " + fmt(c11_time_ratio) + ")";
    if (!same) return {Verdict::fail, detail};
    if (par::num_procs() < 4) return {Verdict::skip, detail + "; only " + std::to_string(par::num_procs()) + " core(s), timing not judged"};
    return ok(ratio <= c11_time_ratio, detail);
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"MMS 1D spatial order", c1},
        {"MMS 1D temporal order", c2},
        {"ODE-limit equivalence", c3},
        {"Conservation of total population", c4},
        {"Two-grid operator oracle", c5},
        {"Partition-of-unity identity", c6},
        {"Preconditioner separation", c7},
        {"Numerical scalability trend", c8},
        {"Coarse-solver variant behavior", c9},
        {"GMRES contract", c10},
        {"Strong-scaling smoke", c11},
    };
    const std::string which = argc > 1 ? argv[1] : "all";
    int code = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        if (which != "all" && which != std::to_string(k + 1)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {Verdict::fail, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
        std::printf("[%s] %2zu %-34s %s (%.1fs)\n", tag, k + 1, criteria[k].first.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        if (o.verdict == Verdict::fail) code = 1;
        else if (o.verdict == Verdict::skip && code == 0 && which != "all") code = 77;
    }
    return code;
}
