#include "epidd/kernels.hpp"

#include <cmath>

namespace epidd::kernels::serial {

void spmv(const CsrMatrix& a, const double* x, double* y)
{
    for (Index i = 0; i < a.n_rows; ++i) {
        double acc = 0.0;
        for (Index k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) acc += a.values[k] * x[a.col_idx[k]];
        y[i] = acc;
    }
}

void residual(const CsrMatrix& a, const double* b, const double* x, double* y)
{
    spmv(a, x, y);
    for (Index i = 0; i < a.n_rows; ++i) y[i] = b[i] - y[i];
}

double dot(const double* x, const double* y, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += x[k] * y[k];
    return acc;
}

double norm2(const double* x, std::size_t n) { return std::sqrt(dot(x, x, n)); }

void axpy(double alpha, const double* x, double* y, std::size_t n)
{
    for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

void jacobi_sweep(const CsrMatrix& a, const double* inv_diag, const double* b, double omega,
                  double* x, double* work)
{
    residual(a, b, x, work);
    for (Index i = 0; i < a.n_rows; ++i) x[i] += omega * inv_diag[i] * work[i];
}

}  // namespace epidd::kernels::serial
