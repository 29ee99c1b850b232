#include "epidd/kernels.hpp"
#include "epidd/parallel.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace epidd;

namespace {

struct ThreadScope {
    int saved = par::max_threads();
    bool det = par::deterministic();
    ~ThreadScope()
    {
        par::set_threads(saved);
        par::set_deterministic(det);
    }
};

}  // namespace

TEST_CASE("OpenMP kernels reproduce the serial reference")
{
    ThreadScope scope;
    std::mt19937 rng(3);
    const CsrMatrix a = test::random_sparse(3000, 0.002, rng, 4.0);
    const Vector x = test::random_vector(3000, rng);
    const Vector b = test::random_vector(3000, rng);

    for (int threads : {1, 3}) {
        par::set_threads(threads);
        Vector y1(3000), y2(3000);
        kernels::spmv(a, x.data(), y1.data());
        kernels::serial::spmv(a, x.data(), y2.data());
        CHECK(y1 == y2);

        kernels::residual(a, b.data(), x.data(), y1.data());
        kernels::serial::residual(a, b.data(), x.data(), y2.data());
        CHECK(y1 == y2);

        Vector z1 = b, z2 = b;
        kernels::axpy(0.3, x.data(), z1.data(), z1.size());
        kernels::serial::axpy(0.3, x.data(), z2.data(), z2.size());
        CHECK(z1 == z2);

        const Vector inv = [&] {
            Vector d = a.diagonal();
            for (double& v : d) v = 1.0 / v;
            return d;
        }();
        Vector w1(3000), w2(3000);
        z1 = x;
        z2 = x;
        kernels::jacobi_sweep(a, inv.data(), b.data(), 2.0 / 3.0, z1.data(), w1.data());
        kernels::serial::jacobi_sweep(a, inv.data(), b.data(), 2.0 / 3.0, z2.data(), w2.data());
        CHECK(z1 == z2);

        CHECK(kernels::dot(x, b) == doctest::Approx(kernels::serial::dot(x.data(), b.data(), x.size())).epsilon(1e-13));
        CHECK(kernels::norm2(x) == doctest::Approx(kernels::serial::norm2(x.data(), x.size())).epsilon(1e-13));
    }
}

TEST_CASE("deterministic reductions do not depend on the thread count")
{
    ThreadScope scope;
    par::set_deterministic(true);
    std::mt19937 rng(5);
    const Vector x = test::random_vector(50000, rng);
    const Vector y = test::random_vector(50000, rng);
    par::set_threads(1);
    const double d1 = kernels::dot(x, y);
    const double n1 = kernels::norm2(x);
    par::set_threads(4);
    CHECK(kernels::dot(x, y) == d1);
    CHECK(kernels::norm2(x) == n1);
}
