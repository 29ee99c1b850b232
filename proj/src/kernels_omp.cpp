#include "epidd/kernels.hpp"
#include "epidd/parallel.hpp"

#include <cmath>
#include <vector>

#include <omp.h>

namespace epidd::kernels {

namespace {

using std::ptrdiff_t;

double blocked_dot(const double* x, const double* y, std::size_t n)
{
    const std::size_t bs = par::reduction_block;
    const std::size_t nb = (n + bs - 1) / bs;
    std::vector<double> partial(nb, 0.0);
#pragma omp parallel for schedule(static)
    for (ptrdiff_t b = 0; b < static_cast<ptrdiff_t>(nb); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * bs;
        const std::size_t hi = std::min(n, lo + bs);
        double acc = 0.0;
        for (std::size_t k = lo; k < hi; ++k) acc += x[k] * y[k];
        partial[b] = acc;
    }
    double sum = 0.0;
    for (double p : partial) sum += p;
    return sum;
}

}  // namespace

void spmv(const CsrMatrix& a, const double* x, double* y)
{
    const Index n = a.n_rows;
    const Index* rp = a.row_ptr.data();
    const Index* ci = a.col_idx.data();
    const double* v = a.values.data();
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Index k = rp[i]; k < rp[i + 1]; ++k) acc += v[k] * x[ci[k]];
        y[i] = acc;
    }
}

void residual(const CsrMatrix& a, const double* b, const double* x, double* y)
{
    const Index n = a.n_rows;
    const Index* rp = a.row_ptr.data();
    const Index* ci = a.col_idx.data();
    const double* v = a.values.data();
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Index k = rp[i]; k < rp[i + 1]; ++k) acc += v[k] * x[ci[k]];
        y[i] = b[i] - acc;
    }
}

double dot(const double* x, const double* y, std::size_t n)
{
    if (par::deterministic()) return blocked_dot(x, y, n);
    double acc = 0.0;
#pragma omp parallel for reduction(+ : acc) schedule(static)
    for (ptrdiff_t k = 0; k < static_cast<ptrdiff_t>(n); ++k) acc += x[k] * y[k];
    return acc;
}

double norm2(const double* x, std::size_t n) { return std::sqrt(dot(x, x, n)); }

void axpy(double alpha, const double* x, double* y, std::size_t n)
{
#pragma omp parallel for schedule(static)
    for (ptrdiff_t k = 0; k < static_cast<ptrdiff_t>(n); ++k) y[k] += alpha * x[k];
}

void jacobi_sweep(const CsrMatrix& a, const double* inv_diag, const double* b, double omega,
                  double* x, double* work)
{
    residual(a, b, x, work);
    const Index n = a.n_rows;
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) x[i] += omega * inv_diag[i] * work[i];
}

}  // namespace epidd::kernels
