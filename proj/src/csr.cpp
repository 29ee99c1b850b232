#include "epidd/csr.hpp"
#include "epidd/kernels.hpp"

#include <algorithm>
#include <numeric>

namespace epidd {

CsrMatrix CsrMatrix::from_triplets(Index rows, Index cols, std::vector<Triplet> entries)
{
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw DimensionError("triplet index out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    CsrMatrix m;
    m.n_rows = rows;
    m.n_cols = cols;
    m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& t = entries[k];
        if (k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
            m.values.back() += t.value;
            continue;
        }
        m.col_idx.push_back(t.col);
        m.values.push_back(t.value);
        ++m.row_ptr[t.row + 1];
    }
    std::partial_sum(m.row_ptr.begin(), m.row_ptr.end(), m.row_ptr.begin());
    return m;
}

CsrMatrix CsrMatrix::identity(Index n)
{
    CsrMatrix m;
    m.n_rows = m.n_cols = n;
    m.row_ptr.resize(static_cast<std::size_t>(n) + 1);
    std::iota(m.row_ptr.begin(), m.row_ptr.end(), 0);
    m.col_idx.resize(n);
    std::iota(m.col_idx.begin(), m.col_idx.end(), 0);
    m.values.assign(n, 1.0);
    return m;
}

CsrMatrix CsrMatrix::from_dense(Index rows, Index cols, const std::vector<double>& a)
{
    if (a.size() != static_cast<std::size_t>(rows) * cols) throw DimensionError("dense size mismatch");
    CsrMatrix m;
    m.n_rows = rows;
    m.n_cols = cols;
    m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            const double v = a[static_cast<std::size_t>(i) * cols + j];
            if (v != 0.0) {
                m.col_idx.push_back(j);
                m.values.push_back(v);
            }
        }
        m.row_ptr[i + 1] = static_cast<Index>(m.col_idx.size());
    }
    return m;
}

double CsrMatrix::at(Index i, Index j) const
{
    const auto first = col_idx.begin() + row_ptr[i];
    const auto last = col_idx.begin() + row_ptr[i + 1];
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values[it - col_idx.begin()];
}

Vector CsrMatrix::diagonal() const
{
    Vector d(std::min(n_rows, n_cols), 0.0);
    for (Index i = 0; i < static_cast<Index>(d.size()); ++i) d[i] = at(i, i);
    return d;
}

std::vector<double> CsrMatrix::to_dense() const
{
    std::vector<double> d(static_cast<std::size_t>(n_rows) * n_cols, 0.0);
    for (Index i = 0; i < n_rows; ++i)
        for (Index k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            d[static_cast<std::size_t>(i) * n_cols + col_idx[k]] += values[k];
    return d;
}

void CsrMatrix::check() const
{
    if (row_ptr.size() != static_cast<std::size_t>(n_rows) + 1 || row_ptr.front() != 0 ||
        static_cast<std::size_t>(row_ptr.back()) != col_idx.size() || col_idx.size() != values.size())
        throw DimensionError("inconsistent CSR arrays");
    for (Index i = 0; i < n_rows; ++i) {
        if (row_ptr[i + 1] < row_ptr[i]) throw DimensionError("row_ptr not monotone");
        for (Index k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            if (col_idx[k] < 0 || col_idx[k] >= n_cols) throw DimensionError("column index out of range");
            if (k > row_ptr[i] && col_idx[k] <= col_idx[k - 1])
                throw DimensionError("column indices not strictly increasing");
        }
    }
}

Vector spmv(const CsrMatrix& a, const Vector& x)
{
    if (static_cast<Index>(x.size()) != a.n_cols)
        throw DimensionError("spmv: vector of length " + std::to_string(x.size()) + " for " +
                             std::to_string(a.n_cols) + " columns");
    Vector y(a.n_rows);
    kernels::spmv(a, x.data(), y.data());
    return y;
}

CsrMatrix transpose(const CsrMatrix& a)
{
    CsrMatrix t;
    t.n_rows = a.n_cols;
    t.n_cols = a.n_rows;
    t.row_ptr.assign(static_cast<std::size_t>(a.n_cols) + 1, 0);
    for (Index c : a.col_idx) ++t.row_ptr[c + 1];
    std::partial_sum(t.row_ptr.begin(), t.row_ptr.end(), t.row_ptr.begin());
    t.col_idx.resize(a.nnz());
    t.values.resize(a.nnz());
    std::vector<Index> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
    for (Index i = 0; i < a.n_rows; ++i) {
        for (Index k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            const Index pos = next[a.col_idx[k]]++;
            t.col_idx[pos] = i;
            t.values[pos] = a.values[k];
        }
    }
    return t;
}

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b)
{
    if (a.n_cols != b.n_rows) throw DimensionError("multiply: inner dimensions differ");
    CsrMatrix c;
    c.n_rows = a.n_rows;
    c.n_cols = b.n_cols;
    c.row_ptr.assign(static_cast<std::size_t>(a.n_rows) + 1, 0);
    std::vector<double> acc(b.n_cols, 0.0);
    std::vector<Index> marker(b.n_cols, -1);
    std::vector<Index> cols;
    for (Index i = 0; i < a.n_rows; ++i) {
        cols.clear();
        for (Index ka = a.row_ptr[i]; ka < a.row_ptr[i + 1]; ++ka) {
            const Index j = a.col_idx[ka];
            const double av = a.values[ka];
            for (Index kb = b.row_ptr[j]; kb < b.row_ptr[j + 1]; ++kb) {
                const Index col = b.col_idx[kb];
                if (marker[col] != i) {
                    marker[col] = i;
                    acc[col] = 0.0;
                    cols.push_back(col);
                }
                acc[col] += av * b.values[kb];
            }
        }
        std::sort(cols.begin(), cols.end());
        for (Index col : cols) {
            c.col_idx.push_back(col);
            c.values.push_back(acc[col]);
        }
        c.row_ptr[i + 1] = static_cast<Index>(c.col_idx.size());
    }
    return c;
}

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double alpha, double beta)
{
    if (a.n_rows != b.n_rows || a.n_cols != b.n_cols) throw DimensionError("add: shapes differ");
    CsrMatrix c;
    c.n_rows = a.n_rows;
    c.n_cols = a.n_cols;
    c.row_ptr.assign(static_cast<std::size_t>(a.n_rows) + 1, 0);
    for (Index i = 0; i < a.n_rows; ++i) {
        Index ka = a.row_ptr[i], kb = b.row_ptr[i];
        const Index ea = a.row_ptr[i + 1], eb = b.row_ptr[i + 1];
        while (ka < ea || kb < eb) {
            const Index ca = ka < ea ? a.col_idx[ka] : a.n_cols;
            const Index cb = kb < eb ? b.col_idx[kb] : b.n_cols;
            if (ca == cb) {
                c.col_idx.push_back(ca);
                c.values.push_back(alpha * a.values[ka++] + beta * b.values[kb++]);
            } else if (ca < cb) {
                c.col_idx.push_back(ca);
                c.values.push_back(alpha * a.values[ka++]);
            } else {
                c.col_idx.push_back(cb);
                c.values.push_back(beta * b.values[kb++]);
            }
        }
        c.row_ptr[i + 1] = static_cast<Index>(c.col_idx.size());
    }
    return c;
}

CsrMatrix principal_submatrix(const CsrMatrix& a, std::span<const Index> idx)
{
    std::vector<Index> local(a.n_cols, -1);
    for (std::size_t k = 0; k < idx.size(); ++k) local[idx[k]] = static_cast<Index>(k);
    CsrMatrix s;
    s.n_rows = s.n_cols = static_cast<Index>(idx.size());
    s.row_ptr.assign(idx.size() + 1, 0);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const Index i = idx[r];
        for (Index k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            const Index lj = local[a.col_idx[k]];
            if (lj >= 0) {
                s.col_idx.push_back(lj);
                s.values.push_back(a.values[k]);
            }
        }
        s.row_ptr[r + 1] = static_cast<Index>(s.col_idx.size());
    }
    return s;
}

CsrMatrix galerkin_product(const CsrMatrix& a, const CsrMatrix& p)
{
    return multiply(transpose(p), multiply(a, p));
}

}  // namespace epidd
