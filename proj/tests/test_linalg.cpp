#include <doctest.h>

#include <cmath>
#include <complex>

#include "airykit/linalg.hpp"

using namespace airykit;

TEST_CASE("LU determinant and solve")
{
    Matrix a(3, 3);
    a(0, 0) = 2; a(0, 1) = 1; a(0, 2) = 0;
    a(1, 0) = 1; a(1, 1) = 3; a(1, 2) = 1;
    a(2, 0) = 0; a(2, 1) = 1; a(2, 2) = 4;
    CHECK(determinant(a) == doctest::Approx(18.0).epsilon(1e-13));

    LuFactorization lu = lu_factor(a);
    const std::vector<double> b{1.0, 2.0, 3.0};
    const std::vector<double> x = lu.solve(b);
    for (std::size_t i = 0; i < 3; ++i) {
        double r = -b[i];
        for (std::size_t j = 0; j < 3; ++j) r += a(i, j) * x[j];
        CHECK(std::abs(r) <= 1e-13);
    }
    CHECK(lu.log_abs_determinant() == doctest::Approx(std::log(18.0)));
    CHECK(lu.determinant_sign() == 1);
}

TEST_CASE("singular matrix reports zero determinant")
{
    Matrix a(2, 2);
    a(0, 0) = 1; a(0, 1) = 2;
    a(1, 0) = 2; a(1, 1) = 4;
    CHECK(determinant(a) == 0.0);
}

TEST_CASE("singular values of a known matrix")
{
    // A = [[3, 0], [0, -2]]: singular values 3, 2
    Matrix a(2, 2);
    a(0, 0) = 3; a(1, 1) = -2;
    const std::vector<double> sv = singular_values(a);
    CHECK(sv[0] == doctest::Approx(3.0));
    CHECK(sv[1] == doctest::Approx(2.0));
}

TEST_CASE("symmetric eigenvalues: discrete Laplacian spectrum")
{
    const int n = 12;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = 2.0;
        if (i + 1 < n) {
            a(i, i + 1) = -1.0;
            a(i + 1, i) = -1.0;
        }
    }
    const std::vector<double> ev = symmetric_eigenvalues(a);
    for (int k = 1; k <= n; ++k) {
        const double expected = 2.0 - 2.0 * std::cos(M_PI * k / (n + 1.0));
        CHECK(ev[k - 1] == doctest::Approx(expected).epsilon(1e-11));
    }
}

TEST_CASE("tridiagonal eigenvalues match the dense path")
{
    std::vector<double> d{1.0, -2.0, 0.5, 3.0};
    std::vector<double> e{0.7, -1.1, 0.3};
    Matrix a(4, 4);
    for (int i = 0; i < 4; ++i) a(i, i) = d[i];
    for (int i = 0; i < 3; ++i) {
        a(i, i + 1) = e[i];
        a(i + 1, i) = e[i];
    }
    const auto t = tridiagonal_eigenvalues(d, e);
    const auto s = symmetric_eigenvalues(a);
    for (int i = 0; i < 4; ++i) CHECK(t[i] == doctest::Approx(s[i]).epsilon(1e-12));
}

TEST_CASE("hermitian eigenvalues against the real-symmetric embedding")
{
    using C = std::complex<double>;
    const std::size_t n = 5;
    std::vector<C> h(n * n);
    // fixed pseudo-random Hermitian matrix
    auto val = [](int i, int j) {
        return std::sin(3.0 * i + 1.0) * std::cos(2.0 * j) + 0.1 * i * j;
    };
    for (std::size_t i = 0; i < n; ++i) {
        h[i * n + i] = C(val(i, i), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const C v(val(i, j), 0.3 * val(j, i));
            h[i * n + j] = v;
            h[j * n + i] = std::conj(v);
        }
    }
    // embedding [[X, -Y], [Y, X]] has each eigenvalue doubled
    Matrix big(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            big(i, j) = h[i * n + j].real();
            big(i + n, j + n) = h[i * n + j].real();
            big(i, j + n) = -h[i * n + j].imag();
            big(i + n, j) = h[i * n + j].imag();
        }
    const auto he = hermitian_eigenvalues(h, n);
    const auto be = symmetric_eigenvalues(big);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(he[i] == doctest::Approx(be[2 * i]).epsilon(1e-10));
}
