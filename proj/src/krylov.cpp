#include "epidd/krylov.hpp"
#include "epidd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epidd {

void KrylovConfig::validate() const
{
    if (!(rtol > 0.0) || !(atol > 0.0) || !(dtol > 0.0))
        throw std::invalid_argument("Krylov tolerances must be positive");
    if (max_outer < 1 || max_inner < 1) throw std::invalid_argument("Krylov iteration caps must be >= 1");
    if (restart < 0) throw std::invalid_argument("GMRES restart must be >= 0");
}

KrylovConfig KrylovConfig::inner() const
{
    KrylovConfig c = *this;
    c.max_outer = max_inner;
    return c;
}

KrylovStatus classify_residual(double rnorm, double bnorm, const KrylovConfig& cfg)
{
    if (!std::isfinite(rnorm)) return KrylovStatus::diverged;
    if (rnorm < std::max(cfg.rtol * bnorm, cfg.atol)) return KrylovStatus::converged;
    if (rnorm > cfg.dtol * bnorm) return KrylovStatus::diverged;
    return KrylovStatus::running;
}

LinearOperator as_operator(const CsrMatrix& a)
{
    return [&a](const Vector& in, Vector& out) { kernels::spmv(a, in.data(), out.data()); };
}

namespace {

void apply_or_copy(const LinearOperator& m, const Vector& in, Vector& out)
{
    if (m)
        m(in, out);
    else
        out = in;
}

KrylovReport run_gmres(const LinearOperator& a, const Vector& b, const LinearOperator& m,
                       const KrylovConfig& cfg, Vector& x, bool flexible)
{
    cfg.validate();
    const std::size_t n = b.size();
    if (x.size() != n) throw DimensionError("GMRES: initial guess length mismatch");

    KrylovReport rep;
    rep.rhs_norm = kernels::norm2(b);

    Vector r(n), w(n), z(n);
    a(x, w);
    for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - w[k];
    double beta = kernels::norm2(r);
    rep.residual_history.push_back(beta);

    KrylovStatus status = classify_residual(beta, rep.rhs_norm, cfg);
    const int cycle_cap = cfg.restart > 0 ? cfg.restart : cfg.max_outer;

    std::vector<Vector> basis;
    std::vector<Vector> directions;
    std::vector<std::vector<double>> h;
    std::vector<double> cs, sn, g;

    while (status == KrylovStatus::running && rep.iterations < cfg.max_outer) {
        const int m_len = std::min(cycle_cap, cfg.max_outer - rep.iterations);
        basis.assign(1, r);
        for (double& v : basis[0]) v /= beta;
        directions.clear();
        h.assign(m_len, std::vector<double>(m_len + 1, 0.0));
        cs.assign(m_len, 0.0);
        sn.assign(m_len, 0.0);
        g.assign(m_len + 1, 0.0);
        g[0] = beta;

        int j = 0;
        bool breakdown = false;
        for (; j < m_len; ++j) {
            apply_or_copy(m, basis[j], z);
            if (flexible) directions.push_back(z);
            a(z, w);
            auto& hj = h[j];
            for (int i = 0; i <= j; ++i) {
                hj[i] = kernels::dot(w, basis[i]);
                kernels::axpy(-hj[i], basis[i].data(), w.data(), n);
            }
            hj[j + 1] = kernels::norm2(w);
            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * hj[i] + sn[i] * hj[i + 1];
                hj[i + 1] = -sn[i] * hj[i] + cs[i] * hj[i + 1];
                hj[i] = t;
            }
            const double hnext = hj[j + 1];
            const double rho = std::hypot(hj[j], hnext);
            if (rho == 0.0) {
                cs[j] = 1.0;
                sn[j] = 0.0;
            } else {
                cs[j] = hj[j] / rho;
                sn[j] = hnext / rho;
            }
            hj[j] = rho;
            hj[j + 1] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];

            ++rep.iterations;
            const double res = std::abs(g[j + 1]);
            rep.residual_history.push_back(res);
            status = classify_residual(res, rep.rhs_norm, cfg);
            breakdown = hnext == 0.0 || rho == 0.0;
            if (status != KrylovStatus::running || breakdown) {
                ++j;
                break;
            }
            basis.emplace_back(w);
            for (double& v : basis.back()) v /= hnext;
        }

        // Back substitution on the triangular factor; zero pivots leave y = 0.
        std::vector<double> y(j, 0.0);
        for (int i = j - 1; i >= 0; --i) {
            double acc = g[i];
            for (int k = i + 1; k < j; ++k) acc -= h[k][i] * y[k];
            y[i] = h[i][i] != 0.0 ? acc / h[i][i] : 0.0;
        }
        if (flexible) {
            for (int i = 0; i < j; ++i) kernels::axpy(y[i], directions[i].data(), x.data(), n);
        } else {
            std::fill(w.begin(), w.end(), 0.0);
            for (int i = 0; i < j; ++i) kernels::axpy(y[i], basis[i].data(), w.data(), n);
            apply_or_copy(m, w, z);
            kernels::axpy(1.0, z.data(), x.data(), n);
        }

        if (status != KrylovStatus::running || breakdown || rep.iterations >= cfg.max_outer) break;
        a(x, w);
        for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - w[k];
        beta = kernels::norm2(r);
        status = classify_residual(beta, rep.rhs_norm, cfg);
    }

    a(x, w);
    for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - w[k];
    rep.final_residual_norm = kernels::norm2(r);
    rep.converged = status == KrylovStatus::converged;
    rep.diverged = status == KrylovStatus::diverged;
    if (status == KrylovStatus::running && rep.iterations < cfg.max_outer)
        rep.converged = classify_residual(rep.final_residual_norm, rep.rhs_norm, cfg) == KrylovStatus::converged;
    return rep;
}

}  // namespace

KrylovReport gmres(const LinearOperator& a, const Vector& b, const LinearOperator& precond,
                   const KrylovConfig& cfg, Vector& x)
{
    return run_gmres(a, b, precond, cfg, x, false);
}

KrylovReport fgmres(const LinearOperator& a, const Vector& b, const LinearOperator& precond,
                    const KrylovConfig& cfg, Vector& x)
{
    return run_gmres(a, b, precond, cfg, x, true);
}

Vector jacobi_smooth(const CsrMatrix& a, const Vector& b, Vector x, int sweeps, double omega)
{
    Vector inv = a.diagonal();
    for (std::size_t i = 0; i < inv.size(); ++i) {
        if (inv[i] == 0.0) throw std::invalid_argument("Jacobi: zero diagonal entry in row " + std::to_string(i));
        inv[i] = 1.0 / inv[i];
    }
    Vector work(x.size());
    for (int s = 0; s < sweeps; ++s) kernels::jacobi_sweep(a, inv.data(), b.data(), omega, x.data(), work.data());
    return x;
}

}  // namespace epidd
