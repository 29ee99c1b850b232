#include "epidd/mms.hpp"
#include "epidd/verify_cases.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace epidd;

namespace {

using Real = long double;

// Finite-difference residual u_t - div(N nu grad u) - reaction, in extended precision.
Real fd_forcing(const ManufacturedSolution& ms, const ModelParameters& p, int c, Real x, Real y, Real t)
{
    const Real h = 1e-5L;
    auto u = [&](int k, Real xx, Real yy, Real tt) {
        const Real theta = ms.dim == 1 ? 10.0L * xx + 0.2L * tt : 10.0L * xx * yy + 0.2L * tt;
        return static_cast<Real>(ms.amplitude) * std::sin(theta) + static_cast<Real>(ms.offsets[k]);
    };
    auto n = [&](Real xx, Real yy, Real tt) {
        Real s = 0.0L;
        for (int k = 0; k < n_compartments; ++k) s += u(k, xx, yy, tt);
        return s;
    };
    const Real nu = p.nu(static_cast<Compartment>(c));
    const Real ut = (u(c, x, y, t + h) - u(c, x, y, t - h)) / (2.0L * h);
    auto axis = [&](Real dx, Real dy) {
        const Real np = n(x + dx / 2, y + dy / 2, t), nm = n(x - dx / 2, y - dy / 2, t);
        return (np * (u(c, x + dx, y + dy, t) - u(c, x, y, t)) - nm * (u(c, x, y, t) - u(c, x - dx, y - dy, t))) /
               (h * h);
    };
    Real div = axis(h, 0.0L);
    if (ms.dim == 2) div += axis(0.0L, h);
    div *= nu;

    const Real s = u(0, x, y, t), e = u(1, x, y, t), i = u(2, x, y, t);
    const Real a = 1.0L - static_cast<Real>(p.allee) / n(x, y, t);
    const Real bi = p.beta_i(double(x), double(y), double(t)), be = p.beta_e(double(x), double(y), double(t));
    const Real infection = a * (bi * s * i + be * s * e);
    Real reaction = 0.0L;
    switch (c) {
    case 0: reaction = -infection; break;
    case 1: reaction = infection - (p.sigma + p.gamma_e) * e; break;
    case 2: reaction = p.sigma * e - (p.gamma_d + p.gamma_r) * i; break;
    case 3: reaction = p.gamma_r * i + p.gamma_e * e; break;
    case 4: reaction = p.gamma_d * i; break;
    }
    return ut - div - reaction;
}

}  // namespace

TEST_CASE("forcing matches the finite-difference residual")
{
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> ux(0.0, 1.0), ut(0.0, 50.0);
    for (int dim : {1, 2}) {
        const ManufacturedSolution ms = dim == 1 ? ManufacturedSolution::one_d() : ManufacturedSolution::two_d();
        const ModelParameters p = dim == 1 ? mms_parameters_1d() : mms_parameters_2d();
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const double x = ux(rng), y = dim == 2 ? ux(rng) : 0.0, t = ut(rng);
            for (int c = 0; c < n_compartments; ++c)
                worst = std::max(worst, double(std::abs(ms.forcing(c, x, y, t, p) - fd_forcing(ms, p, c, x, y, t))));
        }
        CAPTURE(dim);
        CHECK(worst <= 1e-5);
    }
}

TEST_CASE("forcing limits")
{
    ManufacturedSolution flat = ManufacturedSolution::one_d();
    flat.amplitude = 0.0;
    const ModelParameters zero{};
    for (int c = 0; c < n_compartments; ++c) CHECK(flat.forcing(c, 0.3, 0.0, 1.0, zero) == 0.0);

    const ManufacturedSolution ms = ManufacturedSolution::one_d();
    for (int c = 0; c < n_compartments; ++c)
        CHECK(ms.forcing(c, 0.3, 0.0, 1.5, zero) == doctest::Approx(0.2 * 25.0 * std::cos(3.0 + 0.3)).epsilon(1e-13));
}

TEST_CASE("Neumann data on the left edge")
{
    const ManufacturedSolution ms = ManufacturedSolution::two_d();
    const ModelParameters p = mms_parameters_2d();
    const double y = 0.7, t = 3.0;
    double n = 0.0;
    for (int c = 0; c < n_compartments; ++c) n += ms.value(c, 0.0, y, t);
    for (int c = 0; c < 4; ++c) {
        const double nu = p.nu(static_cast<Compartment>(c));
        const double g = ms.flux(c, 0.0, y, t, {-1.0, 0.0}, p) / (n * nu);
        CHECK(g == doctest::Approx(-10.0 * 25.0 * y * std::cos(0.2 * t)).epsilon(1e-12));
    }
}

TEST_CASE("1D verification parameter table")
{
    const ModelParameters p = mms_parameters_1d();
    CHECK(p.allee == 0.0);
    CHECK(p.beta_i(0.0, 0.0, 0.0) == 0.01);
    CHECK(p.nu_s == 4.5e-5);
    CHECK(p.nu_e == 1e-3);
    CHECK(p.nu_i == 1e-10);
    CHECK(p.sigma == doctest::Approx(1.0 / 8));
    CHECK(mms_parameters_2d().allee == 100.0);
}

TEST_CASE("errors and orders")
{
    ManufacturedSolution flat = ManufacturedSolution::one_d();
    flat.amplitude = 0.0;
    const Mesh m = interval_mesh(10, 1.0);
    CHECK(flat.relative_error(m, flat.interpolate(m, 0.5), 0.5) <= 1e-15);

    CHECK(std::isnan(observed_order(0.0, 0.0, 2.0)));
    CHECK(observed_order(4.0, 1.0, 2.0) == doctest::Approx(2.0));
    const ConvergenceResult zero = make_convergence({0.1, 0.05}, {0.0, 0.0});
    CHECK(std::isnan(zero.rows[1].order));
    CHECK_FALSE(make_convergence({0.1, 0.05, 0.025}, {1.0, 0.5, 0.6}).monotone);
    CHECK(make_convergence({0.1, 0.05, 0.025}, {1.0, 0.25, 0.0625}).monotone);

    const ConvergenceResult ok = make_convergence({0.05, 0.02}, {0.01289, 0.00208});
    CHECK(ok.rows[1].order == doctest::Approx(1.9911).epsilon(1e-3));
}

TEST_CASE("1D spatial study matches the reference errors")
{
    const ReferenceTable ref = spatial_reference();
    const ConvergenceResult res = mms_convergence_spatial_1d(ref.steps);
    CHECK(res.monotone);
    CHECK(judge_convergence(res, ref, mms_error_rel_tol, 2.0, mms_order_tol).pass);
}

TEST_CASE("interpolation error at the initial time")
{
    const ManufacturedSolution ms = ManufacturedSolution::two_d();
    Mms2dOptions opt;
    opt.n = 16;
    opt.steps = 0;
    const Mms2dTrace tr = mms_run_2d(opt);
    const Mesh m = unit_square_mesh(16);
    CHECK(tr.error.front() == doctest::Approx(ms.relative_error(m, ms.interpolate(m, 0.0), 0.0)));
}

TEST_CASE("2D manufactured solution converges at second order in space")
{
    auto err = [](Index n) {
        Mms2dOptions opt;
        opt.n = n;
        opt.dt = 1e-4;
        opt.steps = 3;
        opt.subdomains = 2;
        const Mms2dTrace tr = mms_run_2d(opt);
        REQUIRE(tr.picard_failures == 0);
        return tr.error.back();
    };
    const double order = observed_order(err(16), err(32), 2.0);
    CHECK(order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("pure mass problem has no time discretization error")
{
    const Mesh m = interval_mesh(10, 1.0);
    const FeSpace space(m);
    ModelProblem prob;
    prob.space = &space;
    SolverSettings st;
    st.krylov.rtol = 1e-14;
    const SolverContext ctx(m, st);
    for (double dt : {0.1, 0.05}) {
        StateFields u(m.num_vertices());
        for (int c = 0; c < n_compartments; ++c) std::fill(u[c].begin(), u[c].end(), 100.0 * (c + 1));
        const StateFields u0 = u;
        PicardConfig pc;
        pc.dt = dt;
        run_simulation(prob, ctx, u, 0.0, static_cast<int>(std::lround(1.0 / dt)), pc);
        CHECK(stacked_distance(u, u0) <= 1e-12 * u0.stacked_norm());
    }
}

TEST_CASE("2D error trace judgement")
{
    Mms2dTrace tr;
    tr.error = {1e-4, 3e-4, 2e-4};
    CHECK(judge_mms2d(tr, 1e-2).pass);
    tr.error = {1e-4, 2e-4, 5e-2};
    CHECK_FALSE(judge_mms2d(tr, 1e-2).pass);
    tr.error = {1e-4, NAN};
    CHECK_FALSE(judge_mms2d(tr, 1e-2).pass);
}
