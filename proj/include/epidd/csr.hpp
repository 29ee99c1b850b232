#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace epidd {

using Index = std::int32_t;
using Vector = std::vector<double>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Triplet {
    Index row;
    Index col;
    double value;
};

// Compressed sparse row storage. Column indices are strictly increasing
// within each row.
struct CsrMatrix {
    Index n_rows = 0;
    Index n_cols = 0;
    std::vector<Index> row_ptr{0};
    std::vector<Index> col_idx;
    std::vector<double> values;

    // Duplicate entries are summed; explicit zeros are kept.
    static CsrMatrix from_triplets(Index rows, Index cols, std::vector<Triplet> entries);
    static CsrMatrix identity(Index n);
    static CsrMatrix from_dense(Index rows, Index cols, const std::vector<double>& row_major);

    std::size_t nnz() const { return col_idx.size(); }
    double at(Index i, Index j) const;
    Vector diagonal() const;
    std::vector<double> to_dense() const;
    void check() const;
};

// Exact product y = A x; throws DimensionError on mismatch.
Vector spmv(const CsrMatrix& a, const Vector& x);

CsrMatrix transpose(const CsrMatrix& a);
CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);
CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double alpha = 1.0, double beta = 1.0);
// Rows and columns restricted to a sorted index set.
CsrMatrix principal_submatrix(const CsrMatrix& a, std::span<const Index> idx);
// P^T A P.
CsrMatrix galerkin_product(const CsrMatrix& a, const CsrMatrix& p);

}  // namespace epidd
