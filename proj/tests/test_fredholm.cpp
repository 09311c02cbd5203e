#include <doctest.h>

#include <cmath>
#include <thread>

#include "airykit/airy.hpp"
#include "airykit/distributions.hpp"
#include "airykit/fredholm.hpp"
#include "airykit/kernels.hpp"

using namespace airykit;

namespace {

Kernel airy_k()
{
    Kernel k;
    k.eval = [](double x, double y) { return airy_kernel(x, y); };
    k.symmetric = true;
    return k;
}

} // namespace

TEST_CASE("zero kernel gives determinant one")
{
    Kernel k;
    k.eval = [](double, double) { return 0.0; };
    k.symmetric = true;
    CHECK(nystrom_det(k, gauss_legendre(24, 0.0, 5.0)) == doctest::Approx(1.0));
}

TEST_CASE("rank-one Gaussian kernel: det = normal CDF")
{
    // K(x, y) = e^{-x^2/2}/sqrt(2 pi) on (s, inf): det(I - K) = Phi(s)
    Kernel k;
    k.eval = [](double x, double) { return std::exp(-x * x / 2.0) / std::sqrt(2.0 * M_PI); };
    const double d = nystrom_det(k, gauss_legendre(96, 0.0, 12.0));
    CHECK(d == doctest::Approx(0.5).epsilon(1e-12));
    const double d1 = nystrom_det(k, gauss_legendre(96, 1.0, 13.0));
    CHECK(d1 == doctest::Approx(0.5 * std::erfc(-1.0 / std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("fredholm series: first term is 1 - tr K and rank one is exact")
{
    Kernel k;
    k.eval = [](double x, double y) {
        return std::exp(-x * x - y * y); // rank one u(x) v(y)
    };
    const QuadratureRule rule = gauss_legendre(40, -5.0, 5.0);
    double tr = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
        tr += rule.weights[i] * k.eval(rule.nodes[i], rule.nodes[i]);
    CHECK(fredholm_series(k, rule, 1) == doctest::Approx(1.0 - tr).epsilon(1e-13));
    // all higher minors of a rank-one kernel vanish
    CHECK(fredholm_series(k, rule, 3) == doctest::Approx(fredholm_series(k, rule, 1)));
    CHECK(nystrom_det(k, rule) == doctest::Approx(fredholm_series(k, rule, 1)).epsilon(1e-12));
    CHECK_THROWS(fredholm_series(k, rule, 5));
}

TEST_CASE("series oracle matches nystrom_det for a small Airy kernel")
{
    Kernel k;
    k.eval = [](double x, double y) { return 1e-3 * airy_kernel(x, y); };
    k.symmetric = true;
    const QuadratureRule rule = semi_infinite_rule(0.0, 48);
    CHECK(std::abs(fredholm_series(k, rule, 3) - nystrom_det(k, rule)) <= 1e-12);
}

TEST_CASE("resolvent bilinear: identity and Sherman-Morrison oracles")
{
    const QuadratureRule rule = gauss_legendre(64, -6.0, 6.0);
    auto f = [](double x) { return std::exp(-x * x); };
    auto g = [](double x) { return std::exp(-(x - 0.3) * (x - 0.3)); };
    Kernel zero;
    zero.eval = [](double, double) { return 0.0; };
    const double plain = resolvent_bilinear(zero, f, g, rule);
    double direct = rule.integrate([&](double x) { return f(x) * g(x); });
    CHECK(plain == doctest::Approx(direct).epsilon(1e-12));

    // K = alpha u u^* with <u,u> = 1: <(I-K)^{-1} f, g> = <f,g> + alpha <u,f><u,g>/(1-alpha)
    const double norm = std::sqrt(rule.integrate([](double x) {
        return std::exp(-2.0 * x * x);
    }));
    auto u = [norm](double x) { return std::exp(-x * x) / norm; };
    const double alpha = 0.5;
    Kernel rank1;
    rank1.eval = [u, alpha](double x, double y) { return alpha * u(x) * u(y); };
    const double uf = rule.integrate([&](double x) { return u(x) * f(x); });
    const double ug = rule.integrate([&](double x) { return u(x) * g(x); });
    const double expected = direct + alpha * uf * ug / (1.0 - alpha);
    CHECK(resolvent_bilinear(rank1, f, g, rule) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("trace norm estimates")
{
    Kernel zero;
    zero.eval = [](double, double) { return 0.0; };
    CHECK(trace_norm_estimate(zero, gauss_legendre(16, 0.0, 4.0)) <= 1e-14);

    // || P_0 K_Ai P_0 ||_1 <= int int Ai^2(x+y) dx dy over the quadrant
    Kernel k = airy_k();
    const QuadratureRule rule = semi_infinite_rule(0.0, 64);
    const double tn = trace_norm_estimate(k, rule);
    double bound = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
        for (std::size_t j = 0; j < rule.size(); ++j)
            bound += rule.weights[i] * rule.weights[j] *
                     ai(rule.nodes[i] + rule.nodes[j]) * ai(rule.nodes[i] + rule.nodes[j]);
    CHECK(tn > 0.0);
    CHECK(tn <= bound + 1e-12);
}

TEST_CASE("determinant perturbation obeys the trace-norm continuity bound")
{
    Kernel k1, k2;
    k1.eval = [](double x, double y) { return 0.10 * airy_kernel(x, y); };
    k2.eval = [](double x, double y) { return 0.11 * airy_kernel(x, y); };
    k1.symmetric = k2.symmetric = true;
    const QuadratureRule rule = semi_infinite_rule(0.0, 64);
    const double d1 = nystrom_det(k1, rule), d2 = nystrom_det(k2, rule);
    const double n1 = trace_norm_estimate(k1, rule);
    const double n2 = trace_norm_estimate(k2, rule);
    Kernel diff;
    diff.eval = [](double x, double y) { return 0.01 * airy_kernel(x, y); };
    diff.symmetric = true;
    const double nd = trace_norm_estimate(diff, rule);
    CHECK(std::abs(d1 - d2) <= nd * std::exp(n1 + n2 + 1.0));
}

TEST_CASE("conjugation leaves the determinant unchanged")
{
    Kernel plain = airy_k();
    Kernel weighted = plain;
    weighted.symmetric = false;
    weighted.log_weight = [](double x) { return 0.5 * x; };
    const QuadratureRule rule = semi_infinite_rule(-1.5, 80);
    CHECK(std::abs(nystrom_det(plain, rule) - nystrom_det(weighted, rule)) <= 1e-10);
}

TEST_CASE("projection determinants live in [0,1] and decrease as s decreases")
{
    Kernel k = airy_k();
    double prev = 1.0;
    for (double s : {4.0, 2.0, 0.0, -2.0, -4.0, -6.0}) {
        const double d = nystrom_det(k, semi_infinite_rule(s, 128));
        CHECK(d >= 0.0);
        CHECK(d <= 1.0 + 1e-10);
        CHECK(d <= prev + 1e-12);
        prev = d;
    }
}

TEST_CASE("block determinant with one time equals the plain determinant")
{
    TimeParameters tp;
    tp.times = {0.7};
    tp.levels = {-0.4};
    const ExtendedKernel ek = extended_airy2(tp);
    const QuadratureRule rule = semi_infinite_rule(-0.4, 64);
    const double block = nystrom_det_block(ek, {rule});
    const double plain = nystrom_det(airy_k(), rule);
    CHECK(block == doctest::Approx(plain).epsilon(1e-13));
}

TEST_CASE("non-finite kernel values are reported with the node pair")
{
    Kernel bad;
    bad.eval = [](double x, double) { return x > 1.0 ? std::nan("") : 0.0; };
    CHECK_THROWS_WITH_AS(nystrom_det(bad, gauss_legendre(8, 0.0, 3.0)),
                         doctest::Contains("non-finite kernel value"), std::runtime_error);
}

TEST_CASE("converged_det reports the doubling increment")
{
    const DetResult r = converged_det(
        airy_k(), [](int order) { return semi_infinite_rule(0.0, order); }, 64);
    const double dense = nystrom_det(airy_k(), semi_infinite_rule(0.0, 256));
    CHECK(std::abs(r.value - dense) <= 1e-11);
    CHECK(r.error_estimate <= 1e-10);
}

TEST_CASE("probability clamp policy")
{
    CHECK(clamp_probability(0.5) == 0.5);
    CHECK(clamp_probability(-5e-11) == 0.0);
    CHECK_THROWS(clamp_probability(-1e-3));
}

TEST_CASE("distinct determinants run concurrently with identical results")
{
    const std::vector<double> svals{-2.0, -1.0, 0.0, 1.0};
    std::vector<double> serial(svals.size()), parallel(svals.size());
    for (std::size_t i = 0; i < svals.size(); ++i) serial[i] = f_gue(svals[i]);
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < svals.size(); ++i)
        workers.emplace_back([&, i] { parallel[i] = f_gue(svals[i]); });
    for (auto& w : workers) w.join();
    for (std::size_t i = 0; i < svals.size(); ++i) CHECK(serial[i] == parallel[i]);
}
