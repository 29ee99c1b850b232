#pragma once

#include "epidd/csr.hpp"

#include <memory>
#include <stdexcept>

namespace epidd {

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sparse LU with partial pivoting and a fill-reducing column ordering.
// The factorization is computed once and reused for any number of solves.
class SparseLu {
public:
    SparseLu();
    explicit SparseLu(const CsrMatrix& a);
    ~SparseLu();
    SparseLu(SparseLu&&) noexcept;
    SparseLu& operator=(SparseLu&&) noexcept;

    void factorize(const CsrMatrix& a);
    Index size() const { return n_; }
    // x and b may alias.
    void solve(const double* b, double* x) const;
    Vector solve(const Vector& b) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    Index n_ = 0;
};

Vector lu_solve(const CsrMatrix& a, const Vector& b);

}  // namespace epidd
