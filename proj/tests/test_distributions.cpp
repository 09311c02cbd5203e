#include <doctest.h>

#include <cmath>

#include "airykit/distributions.hpp"

using namespace airykit;

TEST_CASE("Tracy-Widom boundary behavior")
{
    CHECK(std::abs(f_gue(8.0) - 1.0) <= 1e-10);
    CHECK(f_gue(-10.0) <= 1e-6);
    CHECK(f_gue(-13.0) == 0.0);
    // the GOE tail decays at half the GUE rate: 1 - F_GOE(8) is genuinely
    // ~2e-9, so the saturation point sits further out
    CHECK(std::abs(f_goe(8.0) - 1.0) <= 1e-8);
    CHECK(std::abs(f_goe(12.0) - 1.0) <= 1e-10);
}

TEST_CASE("CDFs are monotone and land in [0, 1]")
{
    double pg = 0.0, po = 0.0;
    for (double s = -7.0; s <= 4.0 + 1e-9; s += 0.5) {
        const double g = f_gue(s), o = f_goe(s);
        CHECK(g >= pg - 1e-12);
        CHECK(o >= po - 1e-12);
        CHECK(g <= 1.0 + 1e-10);
        CHECK(o <= 1.0 + 1e-10);
        pg = g;
        po = o;
    }
}

TEST_CASE("GOE determinant form equivalence at s = 0 and s = 0.5")
{
    CHECK(std::abs(det_ps_b0_ps(0.0) - f_goe(0.0)) <= 1e-10);
    // shift of variables: det(I - P_s B_0 P_s) = det(I - P_0 B_{2s} P_0)
    CHECK(std::abs(det_ps_b0_ps(0.5) - f_goe(1.0)) <= 1e-10);
    CHECK(std::abs(f_goe_shifted_form(1.0) - f_goe(1.0)) <= 1e-10);
}

TEST_CASE("two-time fdd: vacuous constraint and degenerate gap")
{
    // x2 -> +inf reduces to the one-time marginal
    TimeParameters tp;
    tp.times = {0.0, 0.6};
    tp.levels = {0.2, 14.0};
    CHECK(std::abs(airy2_fdd(tp, FddRoute::extended_kernel) - f_gue(0.2)) <= 1e-6);

    // gap -> 0 with equal levels approaches the one-time value
    const double one = f_goe(0.4);
    double prev_err = 1e9;
    for (double gap : {0.4, 0.2, 0.1}) {
        TimeParameters t2;
        t2.times = {0.0, gap};
        t2.levels = {0.2, 0.2};
        const double err = std::abs(airy1_fdd(t2, FddRoute::extended_kernel) - one);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err <= 0.06);
}

TEST_CASE("airy2 decorrelation at large gap")
{
    TimeParameters tp;
    tp.times = {0.0, 20.0};
    tp.levels = {0.1, -0.3};
    const double joint = airy2_fdd(tp, FddRoute::extended_kernel);
    CHECK(std::abs(joint - f_gue(0.1) * f_gue(-0.3)) <= 1e-3);
}

TEST_CASE("crossover marginal: monotone in m and alpha limits at the easy side")
{
    double prev = 0.0;
    for (double m : {-1.0, 0.0, 1.0, 2.0}) {
        const double v = g_2to1(1.0, m);
        CHECK(v >= prev);
        prev = v;
    }
    // the +4 limit constant from the stated scaling
    for (double m : {-1.0, 0.0, 1.0})
        CHECK(std::abs(g_2to1(4.0, m) - f_goe(std::pow(2.0, 2.0 / 3.0) * m)) <= 5e-3);
    // conjugated route equals the literal kernel route where both work
    EngineOptions o;
    Kernel lit;
    lit.eval = k_2to1_alpha(1.5);
    const double a = nystrom_det(lit, semi_infinite_rule(0.0, o.order));
    CHECK(std::abs(a - g_2to1(1.5, 0.0, o)) <= 1e-10);
}

TEST_CASE("sup route at alpha = 0 agrees with the kernel route")
{
    CHECK(std::abs(g_2to1_sup_route_alpha0(0.0) - g_2to1(0.0, 0.0)) <= 1e-6);
    CHECK(std::abs(g_2to1_sup_route_alpha0(-0.5) - g_2to1(0.0, -0.5)) <= 1e-6);
}

TEST_CASE("parabolic barrier: closed form, monotonicity, literal cross-check")
{
    for (double m : {-1.0, 0.5})
        CHECK(std::abs(airy2_sup_parabola(m, 3.0, SupRoute::closed_form) -
                       f_goe(std::pow(4.0, 1.0 / 3.0) * m)) <= 1e-10);
    double prev = 0.0;
    for (double m : {-1.0, 0.0, 1.0}) {
        const double v = airy2_sup_parabola(m, 1.0, SupRoute::finite_L);
        CHECK(v > prev);
        prev = v;
    }
    for (double m : {0.0, 1.0})
        CHECK(std::abs(airy2_sup_parabola(m, 1.0, SupRoute::finite_L) -
                       airy2_sup_parabola_literal(m, 1.0)) <= 3e-4);
}

TEST_CASE("persistence: short-interval limit, monotonicity, literal agreement")
{
    const double m = airy1_marginal_mean();
    const double single = f_goe(2.0 * m);
    double prev_err = 1e9, prev_p = 1.0;
    for (double L : {0.3, 0.15, 0.08}) {
        const double p = airy1_persistence(m, L);
        const double err = std::abs(p - single);
        CHECK(err < prev_err);
        prev_err = err;
    }
    for (double L : {0.5, 1.0, 1.5, 2.0}) {
        const double p = airy1_persistence(m, L);
        CHECK(p < prev_p);
        prev_p = p;
    }
    CHECK(std::abs(airy1_persistence(m, 1.0) - airy1_persistence_literal(m, 1.0)) <= 1e-6);
}

TEST_CASE("endpoint density: symmetry, route agreement, far-barrier decay")
{
    const double a = endpoint_joint_density(0.5, 0.0, EndpointRoute::determinant_difference);
    const double b = endpoint_joint_density(-0.5, 0.0, EndpointRoute::determinant_difference);
    CHECK(std::abs(a - b) <= 1e-6);
    const double c = endpoint_joint_density(1.0, -0.5, EndpointRoute::determinant_difference);
    const double d = endpoint_joint_density(1.0, -0.5, EndpointRoute::resolvent);
    CHECK(std::abs(c - d) <= 1e-6);
    CHECK(endpoint_joint_density(0.5, 4.5, EndpointRoute::resolvent) <= 1e-6);
}

TEST_CASE("endpoint marginals on a coarse grid: mass and shape")
{
    std::vector<double> t_grid, m_grid;
    for (int i = 0; i <= 22; ++i) t_grid.push_back(-3.3 + 0.3 * i); // odd count: Simpson symmetric
    for (double m = -5.95; m <= 3.95 + 1e-9; m += 0.25) m_grid.push_back(m);
    EngineOptions o;
    o.order = 64;
    const EndpointDensityGrid g = endpoint_marginals(t_grid, m_grid, o);
    CHECK(std::abs(g.mass - 1.0) <= 5e-3);
    CHECK(std::abs(g.variance_t - 0.2409) <= 8e-3);
    CHECK(std::abs(g.mean_t) <= 1e-6);
}

TEST_CASE("continuum barrier: unreachable barrier saturates at one")
{
    const BarrierFunction g{{0.0, 1.0}, {20.0, 20.0}};
    CHECK(std::abs(continuum_barrier_prob(BarrierProcess::airy2, g, 16).value - 1.0) <= 1e-8);
    CHECK(std::abs(continuum_barrier_prob(BarrierProcess::airy1, g, 16).value - 1.0) <= 1e-8);
}

TEST_CASE("continuum barrier: dyadic refinement reports a convergence estimate")
{
    const double m = airy1_marginal_mean();
    const BarrierFunction g{{0.0, 1.0}, {m, m}};
    const ContinuumResult cr = continuum_barrier_prob(BarrierProcess::airy1, g, 32);
    CHECK(std::isfinite(cr.convergence_estimate));
    CHECK(cr.convergence_estimate < 0.05);
    CHECK(std::abs(cr.value - airy1_persistence(m, 1.0)) <= 2e-3);
    // mesh doubling shrinks the determinant increment at least ~linearly
    CHECK(cr.fitted_rate > 0.5);
}

TEST_CASE("argument errors")
{
    TimeParameters bad;
    bad.times = {0.0, 1.0, 2.0};
    bad.levels = {0.0, 0.0, 0.0};
    CHECK_THROWS(airy2_fdd(bad, FddRoute::extended_kernel));
    CHECK_THROWS(airy1_persistence(0.0, -1.0));
    CHECK_THROWS(persistence_rate(0.0, {1.0, 2.0}));
    CHECK_THROWS(continuum_barrier_prob(BarrierProcess::airy2,
                                        BarrierFunction{{0.0, 1.0}, {0.0, 0.0}}, 1));
}
