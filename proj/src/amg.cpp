#include "epidd/amg.hpp"
#include "epidd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epidd {

std::vector<std::vector<Index>> strength_graph(const CsrMatrix& a, double theta)
{
    const Vector diag = a.diagonal();
    std::vector<std::vector<Index>> s(a.n_rows);
    for (Index i = 0; i < a.n_rows; ++i) {
        for (Index k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            const Index j = a.col_idx[k];
            if (j == i) continue;
            if (std::abs(a.values[k]) >= theta * std::sqrt(std::abs(diag[i] * diag[j]))) s[i].push_back(j);
        }
    }
    // Symmetrize so aggregation sees an undirected graph.
    std::vector<std::vector<Index>> sym = s;
    for (Index i = 0; i < a.n_rows; ++i)
        for (Index j : s[i]) sym[j].push_back(i);
    for (auto& l : sym) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    return sym;
}

std::vector<Index> aggregate(const std::vector<std::vector<Index>>& strong, Index& n_aggregates)
{
    const Index n = static_cast<Index>(strong.size());
    std::vector<Index> agg(n, -1);
    Index next = 0;
    // Pass 1: a node whose strong neighbors are all free seeds an aggregate with them.
    for (Index i = 0; i < n; ++i) {
        if (agg[i] >= 0 || strong[i].empty()) continue;
        const bool free = std::all_of(strong[i].begin(), strong[i].end(), [&](Index j) { return agg[j] < 0; });
        if (!free) continue;
        agg[i] = next;
        for (Index j : strong[i]) agg[j] = next;
        ++next;
    }
    // Pass 2: attach leftovers to a neighboring aggregate.
    std::vector<Index> pass1 = agg;
    for (Index i = 0; i < n; ++i) {
        if (agg[i] >= 0) continue;
        for (Index j : strong[i])
            if (pass1[j] >= 0) {
                agg[i] = pass1[j];
                break;
            }
    }
    // Pass 3: remaining nodes (isolated or surrounded by leftovers) form new aggregates.
    for (Index i = 0; i < n; ++i) {
        if (agg[i] >= 0) continue;
        agg[i] = next;
        for (Index j : strong[i])
            if (agg[j] < 0) agg[j] = next;
        ++next;
    }
    n_aggregates = next;
    return agg;
}

namespace {

Vector inverse_diagonal(const CsrMatrix& a)
{
    Vector d = a.diagonal();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] == 0.0) throw std::invalid_argument("AMG: zero diagonal entry in row " + std::to_string(i));
        d[i] = 1.0 / d[i];
    }
    return d;
}

// Gershgorin bound on the spectral radius of D^-1 A.
double jacobi_radius_bound(const CsrMatrix& a, const Vector& inv_diag)
{
    double rho = 0.0;
    for (Index i = 0; i < a.n_rows; ++i) {
        double row = 0.0;
        for (Index k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) row += std::abs(a.values[k]);
        rho = std::max(rho, row * std::abs(inv_diag[i]));
    }
    return rho;
}

}  // namespace

AmgHierarchy amg_setup(const CsrMatrix& a, const AmgConfig& cfg)
{
    if (a.n_rows != a.n_cols) throw DimensionError("AMG needs a square matrix");
    if (cfg.max_levels < 1 || cfg.coarse_size < 1 || !(cfg.theta >= 0.0))
        throw std::invalid_argument("AMG: invalid configuration");
    AmgHierarchy h;
    h.config = cfg;
    h.levels.push_back({a, {}, {}, inverse_diagonal(a)});

    while (h.num_levels() < cfg.max_levels && h.levels.back().a.n_rows > cfg.coarse_size) {
        const AmgLevel& fine = h.levels.back();
        const Index n = fine.a.n_rows;
        Index nagg = 0;
        const auto agg = aggregate(strength_graph(fine.a, cfg.theta), nagg);
        if (static_cast<double>(nagg) > 0.9 * static_cast<double>(n)) {
            h.warnings.push_back("coarsening stagnated at level " + std::to_string(h.num_levels() - 1) + " (" +
                                 std::to_string(n) + " -> " + std::to_string(nagg) + ")");
            break;
        }
        std::vector<Triplet> t;
        t.reserve(n);
        for (Index i = 0; i < n; ++i) t.push_back({i, agg[i], 1.0});
        const CsrMatrix tentative = CsrMatrix::from_triplets(n, nagg, std::move(t));

        // P = (I - w D^-1 A) T with w = 4 / (3 rho).
        const double w = 4.0 / (3.0 * jacobi_radius_bound(fine.a, fine.inv_diag));
        CsrMatrix da = fine.a;
        for (Index i = 0; i < n; ++i)
            for (Index k = da.row_ptr[i]; k < da.row_ptr[i + 1]; ++k) da.values[k] *= w * fine.inv_diag[i];
        CsrMatrix p = add(tentative, multiply(da, tentative), 1.0, -1.0);
        CsrMatrix r = transpose(p);
        CsrMatrix ac = multiply(r, multiply(fine.a, p));
        h.levels.back().p = std::move(p);
        h.levels.back().r = std::move(r);
        Vector inv = inverse_diagonal(ac);
        h.levels.push_back({std::move(ac), {}, {}, std::move(inv)});
    }
    h.coarsest.factorize(h.levels.back().a);
    return h;
}

void AmgHierarchy::cycle(int level, const Vector& b, Vector& x) const
{
    const AmgLevel& lv = levels[level];
    if (level == num_levels() - 1) {
        coarsest.solve(b.data(), x.data());
        return;
    }
    const std::size_t n = b.size();
    Vector work(n);
    std::fill(x.begin(), x.end(), 0.0);
    for (int s = 0; s < config.pre_sweeps; ++s)
        kernels::jacobi_sweep(lv.a, lv.inv_diag.data(), b.data(), config.omega, x.data(), work.data());
    kernels::residual(lv.a, b.data(), x.data(), work.data());
    Vector bc(lv.r.n_rows), xc(lv.r.n_rows);
    kernels::spmv(lv.r, work.data(), bc.data());
    cycle(level + 1, bc, xc);
    kernels::spmv(lv.p, xc.data(), work.data());
    kernels::axpy(1.0, work.data(), x.data(), n);
    for (int s = 0; s < config.post_sweeps; ++s)
        kernels::jacobi_sweep(lv.a, lv.inv_diag.data(), b.data(), config.omega, x.data(), work.data());
}

void AmgHierarchy::vcycle(const Vector& r, Vector& z) const
{
    if (static_cast<Index>(r.size()) != levels.front().a.n_rows) throw DimensionError("V-cycle: length mismatch");
    z.assign(r.size(), 0.0);
    cycle(0, r, z);
}

Vector AmgHierarchy::vcycle(const Vector& r) const
{
    Vector z;
    vcycle(r, z);
    return z;
}

}  // namespace epidd
