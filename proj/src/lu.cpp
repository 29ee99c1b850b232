#include "epidd/lu.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace epidd {

struct SparseLu::Impl {
    using Matrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
    Eigen::SparseLU<Matrix, Eigen::COLAMDOrdering<int>> lu;
};

SparseLu::SparseLu() = default;
SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

SparseLu::SparseLu(const CsrMatrix& a) { factorize(a); }

void SparseLu::factorize(const CsrMatrix& a)
{
    if (a.n_rows != a.n_cols) throw DimensionError("LU of a non-square matrix");
    Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>> view(
        a.n_rows, a.n_cols, static_cast<Eigen::Index>(a.nnz()), a.row_ptr.data(), a.col_idx.data(),
        a.values.data());
    auto impl = std::make_unique<Impl>();
    Impl::Matrix m = view;
    m.makeCompressed();
    impl->lu.compute(m);
    if (impl->lu.info() != Eigen::Success)
        throw SingularMatrixError("singular matrix: " + impl->lu.lastErrorMessage());
    impl_ = std::move(impl);
    n_ = a.n_rows;
}

void SparseLu::solve(const double* b, double* x) const
{
    Eigen::Map<const Eigen::VectorXd> rhs(b, n_);
    Eigen::VectorXd sol = impl_->lu.solve(rhs);
    Eigen::Map<Eigen::VectorXd>(x, n_) = sol;
}

Vector SparseLu::solve(const Vector& b) const
{
    if (static_cast<Index>(b.size()) != n_) throw DimensionError("LU solve: rhs length mismatch");
    Vector x(n_);
    solve(b.data(), x.data());
    return x;
}

Vector lu_solve(const CsrMatrix& a, const Vector& b) { return SparseLu(a).solve(b); }

}  // namespace epidd
