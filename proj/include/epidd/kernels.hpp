#pragma once

#include "epidd/csr.hpp"

namespace epidd::kernels {

// OpenMP kernels. Reductions honor par::deterministic().
void spmv(const CsrMatrix& a, const double* x, double* y);
// y = b - A x
void residual(const CsrMatrix& a, const double* b, const double* x, double* y);
double dot(const double* x, const double* y, std::size_t n);
double norm2(const double* x, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
// One damped Jacobi sweep: x <- x + omega D^-1 (b - A x). work holds n doubles.
void jacobi_sweep(const CsrMatrix& a, const double* inv_diag, const double* b, double omega,
                  double* x, double* work);

inline double dot(const Vector& x, const Vector& y) { return dot(x.data(), y.data(), x.size()); }
inline double norm2(const Vector& x) { return norm2(x.data(), x.size()); }

namespace serial {

void spmv(const CsrMatrix& a, const double* x, double* y);
void residual(const CsrMatrix& a, const double* b, const double* x, double* y);
double dot(const double* x, const double* y, std::size_t n);
double norm2(const double* x, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void jacobi_sweep(const CsrMatrix& a, const double* inv_diag, const double* b, double omega,
                  double* x, double* work);

}  // namespace serial

}  // namespace epidd::kernels
