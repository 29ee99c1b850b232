#pragma once

#include "epidd/csr.hpp"

#include <Eigen/Dense>

#include <random>

namespace test {

inline epidd::CsrMatrix random_sparse(epidd::Index n, double density, std::mt19937& rng, double diag_shift = 0.0)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0), p(0.0, 1.0);
    std::vector<epidd::Triplet> t;
    for (epidd::Index i = 0; i < n; ++i) {
        for (epidd::Index j = 0; j < n; ++j)
            if (i != j && p(rng) < density) t.push_back({i, j, u(rng)});
        t.push_back({i, i, diag_shift + u(rng)});
    }
    return epidd::CsrMatrix::from_triplets(n, n, t);
}

inline Eigen::MatrixXd dense(const epidd::CsrMatrix& a)
{
    return Eigen::Map<const Eigen::MatrixXd>(a.to_dense().data(), a.n_cols, a.n_rows).transpose();
}

inline epidd::Vector random_vector(epidd::Index n, std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    epidd::Vector v(n);
    for (double& x : v) x = u(rng);
    return v;
}

inline Eigen::VectorXd as_eigen(const epidd::Vector& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// 1D Dirichlet Laplacian tridiag(-1, 2, -1).
inline epidd::CsrMatrix laplacian_1d(epidd::Index n)
{
    std::vector<epidd::Triplet> t;
    for (epidd::Index i = 0; i < n; ++i) {
        t.push_back({i, i, 2.0});
        if (i > 0) t.push_back({i, i - 1, -1.0});
        if (i + 1 < n) t.push_back({i, i + 1, -1.0});
    }
    return epidd::CsrMatrix::from_triplets(n, n, t);
}

inline double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm() / b.norm(); }

}  // namespace test
