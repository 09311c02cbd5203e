#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "airykit/airy.hpp"
#include "airykit/quadrature.hpp"

using namespace airykit;

namespace {

// Independent Maclaurin-series oracle, valid for small |x| where the two
// solution series carry no cancellation.
void maclaurin_airy(double x, double* ai_out, double* aip_out)
{
    const double a0 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
    const double b0 = -std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
    double f = 1.0, fp = 0.0, g = x, gp = 1.0;
    double tf = 1.0, tg = x;
    for (int k = 1; k <= 40; ++k) {
        tf *= x * x * x / ((3.0 * k - 1.0) * (3.0 * k));
        tg *= x * x * x / ((3.0 * k) * (3.0 * k + 1.0));
        f += tf;
        g += tg;
        fp += tf * (3.0 * k) / x;
        gp += tg * (3.0 * k + 1.0) / x;
    }
    *ai_out = a0 * f + b0 * g;
    *aip_out = x == 0.0 ? b0 : a0 * fp + b0 * gp;
}

} // namespace

TEST_CASE("Ai at the origin matches the gamma-function oracle")
{
    const double ai0 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
    const double aip0 = -std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
    CHECK(std::abs(ai(0.0) - ai0) <= 1e-14);
    CHECK(std::abs(ai_prime(0.0) - aip0) <= 1e-14);
    CHECK(ai(0.0) == doctest::Approx(0.3550280538878172).epsilon(1e-13));
    CHECK(ai_prime(0.0) == doctest::Approx(-0.2588194037928068).epsilon(1e-13));
}

TEST_CASE("Maclaurin oracle agreement on small arguments")
{
    for (double x = -2.0; x <= 2.0 + 1e-12; x += 0.25) {
        double a, ap;
        maclaurin_airy(x, &a, &ap);
        CHECK(std::abs(ai(x) - a) <= 2e-14);
        CHECK(std::abs(ai_prime(x) - ap) <= 2e-14);
    }
}

TEST_CASE("decay bound |Ai(x)| <= e^{-(2/3)x^{3/2}} for x >= 1")
{
    CHECK(std::abs(ai(5.0)) <= std::exp(-airy_zeta(5.0)));
    for (double x = 1.0; x <= 30.0 + 1e-12; x += 0.5)
        CHECK(std::abs(ai(x)) <= std::exp(-airy_zeta(x)));
}

TEST_CASE("defining ODE residual by central differences")
{
    const double h = 1e-4;
    for (double x : {-3.0, 0.0, 3.0}) {
        const double r = (ai(x + h) - 2.0 * ai(x) + ai(x - h)) / (h * h) - x * ai(x);
        CHECK(std::abs(r) <= 1e-6);
    }
    for (double x = -10.0; x <= 10.0 + 1e-12; x += 0.5) {
        const double r = (ai(x + h) - 2.0 * ai(x) + ai(x - h)) / (h * h) - x * ai(x);
        CHECK(std::abs(r) <= 1e-6);
    }
}

TEST_CASE("derivative consistency by central differences")
{
    const double h = 1e-4;
    const double d = (ai(1.0 + h) - ai(1.0 - h)) / (2.0 * h);
    CHECK(std::abs(d - ai_prime(1.0)) <= 1e-6);
}

TEST_CASE("convolution identity int Ai(a+x) Ai(b-x) dx = 2^{-1/3} Ai(2^{-1/3}(a+b))")
{
    const QuadratureRule rule = gauss_legendre(240, -44.0, 44.0);
    for (double a : {-1.0, 0.0, 1.0})
        for (double b : {-1.0, 0.0, 1.0}) {
            const double lhs =
                rule.integrate([&](double x) { return ai(a + x) * ai(b - x); });
            const double rhs = std::pow(2.0, -1.0 / 3.0) *
                               ai(std::pow(2.0, -1.0 / 3.0) * (a + b));
            CHECK(std::abs(lhs - rhs) <= 1e-8);
        }
}

TEST_CASE("scaled variants are consistent and finite far out")
{
    for (double x : {0.5, 3.0, 9.0, 11.9, 12.1, 20.0, 40.0}) {
        const double rebuilt = ai_scaled(x) * std::exp(-airy_zeta(x));
        CHECK(rebuilt == doctest::Approx(ai(x)).epsilon(1e-12));
        CHECK(std::isfinite(ai_scaled(x)));
        CHECK(std::isfinite(ai_prime_scaled(x)));
    }
    CHECK(ai(150.0) == 0.0); // underflow-to-zero contract
    CHECK(ai_scaled(150.0) > 0.0);
}

TEST_CASE("error estimates and domain errors")
{
    CHECK(airy(10.0).est_abs_err <= 1e-12);
    CHECK(airy(-30.0).est_abs_err <= 1e-12);
    CHECK(std::abs(airy(-200.0).ai) < 1.0);
    CHECK_THROWS_AS(ai(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(ai(-300.0), std::domain_error);
}

TEST_CASE("monotone decay for x >= 1")
{
    double prev = ai(1.0);
    for (double x = 1.25; x <= 20.0; x += 0.25) {
        const double v = ai(x);
        CHECK(v < prev);
        prev = v;
    }
}
