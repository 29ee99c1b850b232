#include "epidd/assembly.hpp"
#include "epidd/lu.hpp"
#include "epidd/parallel.hpp"
#include "epidd/schwarz.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace epidd;

namespace {

struct Problem {
    NestedMeshPair pair;
    CsrMatrix a;
    Problem(Index n, double diffusion) : pair(refine_uniform(unit_square_mesh(n)))
    {
        const FeSpace space(pair.fine);
        a = add(space.mass_matrix(), space.stiffness_matrix(), 1.0, diffusion);
    }
};

int iterations(const CsrMatrix& a, const LinearOperator& m, bool flexible = false, double rtol = 1e-8)
{
    KrylovConfig cfg;
    cfg.rtol = rtol;
    Vector x(a.n_rows, 0.0);
    const Vector b(a.n_rows, 1.0);
    const auto rep = flexible ? fgmres(as_operator(a), b, m, cfg, x) : gmres(as_operator(a), b, m, cfg, x);
    REQUIRE(rep.converged);
    return rep.iterations;
}

}  // namespace

TEST_CASE("one subdomain is an exact inverse")
{
    const Problem p(6, 0.1);
    const Decomposition d = partition(p.pair.fine, 1);
    std::mt19937 rng(1);
    for (auto variant : {SchwarzVariant::ras, SchwarzVariant::asm_}) {
        const OneLevelSchwarz m(p.a, d, variant);
        const Vector x = test::random_vector(p.a.n_rows, rng);
        Vector z(x.size());
        m.apply(spmv(p.a, x), z);
        CHECK(test::rel_diff(test::as_eigen(z), test::as_eigen(x)) <= 1e-10);
        CHECK(iterations(p.a, [&](const Vector& r, Vector& y) { m.apply(r, y); }) == 1);
    }
}

TEST_CASE("disjoint subdomains on a block-diagonal matrix")
{
    std::vector<Triplet> t;
    for (Index b = 0; b < 2; ++b)
        for (Index i = 0; i < 5; ++i) {
            t.push_back({5 * b + i, 5 * b + i, 4.0});
            if (i > 0) t.push_back({5 * b + i, 5 * b + i - 1, -1.0});
            if (i < 4) t.push_back({5 * b + i, 5 * b + i + 1, -1.5});
        }
    const CsrMatrix a = CsrMatrix::from_triplets(10, 10, t);
    Decomposition d;
    d.n_sub = 2;
    d.subdomain_dofs = {{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}};
    d.owner = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    const Eigen::MatrixXd inv = test::dense(a).inverse();
    for (auto variant : {SchwarzVariant::ras, SchwarzVariant::asm_}) {
        const OneLevelSchwarz m(a, d, variant);
        for (Index j = 0; j < 10; ++j) {
            Vector e(10, 0.0), z(10);
            e[j] = 1.0;
            m.apply(e, z);
            CHECK((test::as_eigen(z) - inv.col(j)).norm() <= 1e-12);
        }
    }
}

TEST_CASE("RAS converges no slower than ASM")
{
    const Problem p(5, 1.0);
    const Decomposition d = add_overlap(partition(p.pair.fine, 4), p.pair.fine, 1);
    const OneLevelSchwarz ras(p.a, d, SchwarzVariant::ras), as(p.a, d, SchwarzVariant::asm_);
    const int k_ras = iterations(p.a, [&](const Vector& r, Vector& z) { ras.apply(r, z); });
    const int k_asm = iterations(p.a, [&](const Vector& r, Vector& z) { as.apply(r, z); });
    CHECK(k_ras <= k_asm);
}

TEST_CASE("parallel Schwarz application matches the serial reference")
{
    const int saved = par::max_threads();
    const Problem p(10, 0.5);
    const Decomposition d = add_overlap(partition(p.pair.fine, 8), p.pair.fine, 1);
    std::mt19937 rng(4);
    const Vector r = test::random_vector(p.a.n_rows, rng);
    for (auto variant : {SchwarzVariant::ras, SchwarzVariant::asm_}) {
        const OneLevelSchwarz m(p.a, d, variant);
        Vector serial(r.size());
        m.apply_serial(r, serial);
        for (int threads : {1, 3}) {
            par::set_threads(threads);
            Vector z(r.size());
            m.apply(r, z);
            CHECK(z == serial);
        }
    }
    par::set_threads(saved);
}

TEST_CASE("two-grid degenerate cases")
{
    const Problem p(4, 0.3);
    const CsrMatrix& a = p.a;
    const Index n = a.n_rows;
    const Decomposition d = add_overlap(partition(p.pair.fine, 3), p.pair.fine, 1);
    const OneLevelSchwarz ras(a, d, SchwarzVariant::ras);
    const LinearOperator m = [&](const Vector& r, Vector& z) { ras.apply(r, z); };
    std::mt19937 rng(5);
    const Vector r = test::random_vector(n, rng);

    const LinearOperator zero = [](const Vector&, Vector& z) { std::fill(z.begin(), z.end(), 0.0); };
    Vector z(n);
    apply_two_grid(m, zero, a, r, z);
    const Eigen::MatrixXd da = test::dense(a);
    Vector mr(n);
    m(r, mr);
    Eigen::VectorXd res = test::as_eigen(r) - da * test::as_eigen(mr);
    Vector res_v(res.data(), res.data() + n), m2(n);
    m(res_v, m2);
    CHECK(test::rel_diff(test::as_eigen(z), test::as_eigen(mr) + test::as_eigen(m2)) <= 1e-13);

    const SparseLu lu(a);
    const LinearOperator exact = [&](const Vector& x, Vector& y) { lu.solve(x.data(), y.data()); };
    const CoarseSpace cs = build_coarse_space(p.pair);
    const CoarseCorrection q(a, cs, CoarseOptions{});
    apply_two_grid(exact, [&](const Vector& x, Vector& y) { q.apply(x, y); }, a, r, z);
    CHECK(test::rel_diff(test::as_eigen(z), da.lu().solve(test::as_eigen(r))) <= 1e-10);
}

TEST_CASE("two-grid action matches the dense expansion")
{
    std::mt19937 rng(6);
    const Index n = 60, nc = 12;
    CsrMatrix a = test::random_sparse(n, 0.08, rng, 8.0);
    Decomposition d;
    d.n_sub = 3;
    d.subdomain_dofs = {{}, {}, {}};
    d.owner.resize(n);
    for (Index i = 0; i < n; ++i) {
        d.owner[i] = static_cast<int>(i / 20);
        for (int s = 0; s < 3; ++s)
            if (i >= 20 * s - 3 && i < 20 * (s + 1) + 3) d.subdomain_dofs[s].push_back(i);
    }
    std::vector<Triplet> zt;
    for (Index i = 0; i < n; ++i) zt.push_back({i, i % nc, 1.0 + 0.1 * (i % 7)});
    CoarseSpace cs;
    cs.z = CsrMatrix::from_triplets(n, nc, zt);
    cs.r0 = transpose(cs.z);

    const OneLevelSchwarz ras(a, d, SchwarzVariant::ras);
    const CoarseCorrection q(a, cs, CoarseOptions{});
    const Eigen::MatrixXd da = test::dense(a), dz = test::dense(cs.z);
    Eigen::MatrixXd p1 = Eigen::MatrixXd::Zero(n, n);
    for (int s = 0; s < 3; ++s) {
        const auto& idx = d.subdomain_dofs[s];
        const Index k = static_cast<Index>(idx.size());
        Eigen::MatrixXd ai(k, k);
        for (Index i = 0; i < k; ++i)
            for (Index j = 0; j < k; ++j) ai(i, j) = da(idx[i], idx[j]);
        const Eigen::MatrixXd inv = ai.inverse();
        for (Index i = 0; i < k; ++i)
            if (d.owner[idx[i]] == s)
                for (Index j = 0; j < k; ++j) p1(idx[i], idx[j]) += inv(i, j);
    }
    const Eigen::MatrixXd p2 = dz * (dz.transpose() * da * dz).inverse() * dz.transpose();
    const Eigen::MatrixXd& p3 = p1;
    const Eigen::MatrixXd full = p1 + p2 + p3 - p2 * da * p1 - p3 * da * p1 - p3 * da * p2 + p3 * da * p2 * da * p1;

    const Vector r = test::random_vector(n, rng);
    Vector z(n);
    apply_two_grid([&](const Vector& x, Vector& y) { ras.apply(x, y); }, [&](const Vector& x, Vector& y) { q.apply(x, y); },
                   a, r, z);
    CHECK(test::rel_diff(test::as_eigen(z), full * test::as_eigen(r)) <= 1e-12);
}

TEST_CASE("coarse correction")
{
    const Problem p(6, 0.2);
    const CoarseSpace cs = build_coarse_space(p.pair);
    const Index nc = cs.z.n_cols;
    const Decomposition cd = add_overlap(partition(p.pair.coarse, 4), p.pair.coarse, 1);

    const CoarseCorrection direct(p.a, cs, CoarseOptions{});
    CHECK(test::dense(direct.coarse_matrix()).isApprox(test::dense(cs.r0) * test::dense(p.a) * test::dense(cs.z), 1e-12));

    Vector null(p.a.n_rows, 0.0), out(p.a.n_rows);
    direct.apply(null, out);
    CHECK(out == Vector(p.a.n_rows, 0.0));

    std::mt19937 rng(7);
    const Vector w = test::random_vector(p.a.n_rows, rng);
    Vector ref(p.a.n_rows);
    direct.apply(w, ref);
    for (auto kind : {CoarseSolverKind::gmres_ras, CoarseSolverKind::gmres_amg}) {
        CoarseOptions opt;
        opt.kind = kind;
        opt.inner.rtol = 1e-8;
        opt.coarse_decomposition = &cd;
        const CoarseCorrection it(p.a, cs, opt);
        Vector got(p.a.n_rows);
        it.apply(w, got);
        CHECK(test::rel_diff(test::as_eigen(got), test::as_eigen(ref)) <= 1e-4);
        CHECK(it.stats().inner_iterations.size() == 1);
    }

    // Constant coarse space: a scalar solve.
    CoarseSpace c1;
    c1.z = CsrMatrix::from_triplets(p.a.n_rows, 1, [&] {
        std::vector<Triplet> t;
        for (Index i = 0; i < p.a.n_rows; ++i) t.push_back({i, 0, 1.0});
        return t;
    }());
    c1.r0 = transpose(c1.z);
    const CoarseCorrection scalar(p.a, c1, CoarseOptions{});
    scalar.apply(w, out);
    const double ac = scalar.coarse_matrix().at(0, 0);
    double sw = 0.0;
    for (double v : w) sw += v;
    for (double v : out) CHECK(v == doctest::Approx(sw / ac).epsilon(1e-12));
    (void)nc;
}

TEST_CASE("preconditioner kinds")
{
    CHECK(parse_pc_kind("ras2-v3") == PcKind::ras2_v3);
    CHECK(parse_pc_kind("asm") == PcKind::asm_);
    for (auto k : {PcKind::none, PcKind::asm_, PcKind::ras1, PcKind::ras2, PcKind::ras2_v2, PcKind::ras2_v3})
        CHECK(parse_pc_kind(to_string(k)) == k);
    CHECK_THROWS_WITH(parse_pc_kind("ilu"), doctest::Contains("ras2-v3"));
    CHECK(needs_flexible(PcKind::ras2_v2));
    CHECK(needs_flexible(PcKind::ras2_v3));
    CHECK_FALSE(needs_flexible(PcKind::ras2));

    const Problem p(8, 0.5);
    const Decomposition fine = add_overlap(partition(p.pair.fine, 8), p.pair.fine, 1);
    const Decomposition coarse = add_overlap(partition(p.pair.coarse, 4), p.pair.coarse, 1);
    const CoarseSpace cs = build_coarse_space(p.pair);
    const PcContext ctx{&fine, &coarse, &cs, KrylovConfig{}, AmgConfig{}};
    CHECK(make_preconditioner(PcKind::ras2, p.a, ctx)->coarse()->kind() == CoarseSolverKind::direct);
    CHECK(make_preconditioner(PcKind::ras2_v2, p.a, ctx)->coarse()->kind() == CoarseSolverKind::gmres_ras);
    CHECK(make_preconditioner(PcKind::ras2_v3, p.a, ctx)->coarse()->kind() == CoarseSolverKind::gmres_amg);
    CHECK(make_preconditioner(PcKind::ras1, p.a, ctx)->coarse() == nullptr);

    // Preconditioned systems all converge; two-grid needs fewer iterations than one-level.
    const auto count = [&](PcKind k) {
        const auto pc = make_preconditioner(k, p.a, ctx);
        return iterations(p.a, pc->as_operator(), pc->flexible(), 1e-8);
    };
    const int k1 = count(PcKind::ras1);
    CHECK(count(PcKind::ras2) <= k1);
    CHECK(count(PcKind::ras2_v3) <= k1);
    CHECK(count(PcKind::ras2_v2) <= k1);

    PcContext no_coarse{&fine, nullptr, nullptr, KrylovConfig{}, AmgConfig{}};
    CHECK_THROWS(make_preconditioner(PcKind::ras2, p.a, no_coarse));
}
