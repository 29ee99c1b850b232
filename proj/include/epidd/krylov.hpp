#pragma once

#include "epidd/csr.hpp"

#include <functional>

namespace epidd {

struct KrylovConfig {
    double rtol = 1e-5;
    double atol = 1e-50;
    double dtol = 1e5;
    int max_outer = 200;
    int max_inner = 100;
    // 0 keeps the full Krylov basis up to max_outer.
    int restart = 0;

    void validate() const;
    // Configuration for a nested (coarse) solve: same tolerances, capped at max_inner.
    KrylovConfig inner() const;
};

struct KrylovReport {
    int iterations = 0;
    double final_residual_norm = 0.0;
    double rhs_norm = 0.0;
    bool converged = false;
    bool diverged = false;
    // Entry k is the residual norm after k iterations; entry 0 is ||b - A x0||.
    std::vector<double> residual_history;
};

enum class KrylovStatus { running, converged, diverged };

// Converged when r < max(rtol*||b||, atol); diverged when r > dtol*||b||.
KrylovStatus classify_residual(double rnorm, double bnorm, const KrylovConfig& cfg);

// out = Op(in). out is sized by the caller.
using LinearOperator = std::function<void(const Vector& in, Vector& out)>;

LinearOperator as_operator(const CsrMatrix& a);

// Right-preconditioned GMRES. x holds the initial guess on entry. An empty
// preconditioner means the identity.
KrylovReport gmres(const LinearOperator& a, const Vector& b, const LinearOperator& precond,
                   const KrylovConfig& cfg, Vector& x);

// Flexible GMRES: stores the preconditioned directions so the preconditioner
// may change from one iteration to the next.
KrylovReport fgmres(const LinearOperator& a, const Vector& b, const LinearOperator& precond,
                    const KrylovConfig& cfg, Vector& x);

// Damped Jacobi sweeps; throws on a zero diagonal entry.
Vector jacobi_smooth(const CsrMatrix& a, const Vector& b, Vector x, int sweeps, double omega = 2.0 / 3.0);

}  // namespace epidd
