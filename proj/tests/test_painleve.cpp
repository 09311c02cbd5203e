#include <doctest.h>

#include <cmath>

#include "airykit/airy.hpp"
#include "airykit/distributions.hpp"
#include "airykit/painleve.hpp"

using namespace airykit;

namespace {

const HastingsMcLeodSolution& shared_hm()
{
    static const HastingsMcLeodSolution hm = hastings_mcleod();
    return hm;
}

} // namespace

TEST_CASE("boundary anchor q(s_max) = Ai(s_max)")
{
    const auto& hm = shared_hm();
    CHECK(std::abs(hm.q.back() - ai(hm.boundary_anchor)) <= 1e-12);
}

TEST_CASE("positivity on the whole grid")
{
    const auto& hm = shared_hm();
    for (double v : hm.q) CHECK(v > 0.0);
}

TEST_CASE("ODE residual by 5-point finite differences")
{
    const auto& hm = shared_hm();
    const double h = hm.step;
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < hm.q.size(); i += 7) {
        const double qpp = (-hm.q[i - 2] + 16.0 * hm.q[i - 1] - 30.0 * hm.q[i] +
                            16.0 * hm.q[i + 1] - hm.q[i + 2]) /
                           (12.0 * h * h);
        const double s = hm.s_grid[i];
        worst = std::max(worst,
                         std::abs(qpp - 2.0 * hm.q[i] * hm.q[i] * hm.q[i] - s * hm.q[i]));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("step-halving consistency at q(0)")
{
    const auto& hm = shared_hm();
    const HastingsMcLeodSolution fine = hastings_mcleod(-12.0, 8.0, 1e-10, 512);
    CHECK(std::abs(hm.value(0.0) - fine.value(0.0)) <= 1e-9);
}

TEST_CASE("left asymptote sqrt(-s/2) within 2 percent at s = -6")
{
    const auto& hm = shared_hm();
    const double q6 = hm.value(-6.0);
    CHECK(std::abs(q6 - std::sqrt(3.0)) / std::sqrt(3.0) <= 0.02);
}

TEST_CASE("exponent variant selection against the Fredholm route")
{
    const auto& hm = shared_hm();
    const double fred = f_gue(0.0);
    CHECK(std::abs(f_gue_painleve_variant(0.0, hm, 0) - fred) <= 1e-6);
    CHECK(std::abs(f_gue_painleve_variant(0.0, hm, 1) - fred) > 1e-4);
    CHECK(f_gue_painleve_selected_variant() == "(x-s) q^2");
}

TEST_CASE("F_GUE via Painleve: boundary value and monotonicity")
{
    const auto& hm = shared_hm();
    CHECK(std::abs(f_gue_painleve(hm.boundary_anchor, hm) - 1.0) <= 1e-10);
    double prev = 0.0;
    for (double s = -5.0; s <= 5.0; s += 0.5) {
        const double v = f_gue_painleve(s, hm);
        CHECK(v >= prev - 1e-12);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-12);
        prev = v;
    }
}

TEST_CASE("F_GOE via Painleve matches the Fredholm route")
{
    const auto& hm = shared_hm();
    for (double s : {-3.0, 0.0, 2.0})
        CHECK(std::abs(f_goe_painleve(s, hm) - f_goe(s)) <= 1e-6);
}
