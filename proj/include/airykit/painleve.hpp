#pragma once

#include <string>
#include <vector>

namespace airykit {

/// Hastings-McLeod solution q of q'' = 2q^3 + s q with q ~ Ai at +inf,
/// tabulated on a uniform grid from s_min to s_max (stored ascending).
struct HastingsMcLeodSolution {
    std::vector<double> s_grid;
    std::vector<double> q;
    std::vector<double> q_prime;
    double boundary_anchor = 0.0; // s_max where q was pinned to Ai
    double step = 0.0;

    double value(double s) const;      // quintic Hermite interpolation
    double derivative(double s) const;

    /// int_s^{s_max} q(x)^2 dx, int_s^{s_max} x q(x)^2 dx, int_s^{s_max} q dx,
    /// with analytic Ai-based tails beyond s_max folded in.
    double moment0(double s) const;
    double moment1(double s) const;
    double q_integral(double s) const;

    // cumulative tables (same grid), built by the solver
    std::vector<double> cum_q2, cum_xq2, cum_q;
    double tail_q2 = 0.0, tail_xq2 = 0.0, tail_q = 0.0;
};

/// Solve the boundary-value problem by 4th-order Numerov collocation with a
/// damped Newton iteration; q(s_max) = Ai(s_max), q(s_min) from the left
/// asymptote sqrt(-s/2)(1 + s^{-3}/8 - (73/128) s^{-6}).  Marching is
/// deliberately avoided: the HM branch is exponentially unstable leftward.
HastingsMcLeodSolution hastings_mcleod(double s_min = -12.0, double s_max = 8.0,
                                       double tol = 1e-10, int grid_per_unit = 192);

/// F_GUE via the Tracy-Widom integral formula.  Both printed exponent
/// variants are evaluated; which one is returned is decided once against the
/// Fredholm route (see selected_variant).
double f_gue_painleve(double s, const HastingsMcLeodSolution& soln);

/// F_GOE(s) = e^{-(1/2) int_s^inf q} sqrt(F_GUE(s)).
double f_goe_painleve(double s, const HastingsMcLeodSolution& soln);

/// The two exponent variants, exposed for the selection test:
/// variant 0: int (x-s)   q^2  (returned by f_gue_painleve)
/// variant 1: int (x-s)^2 q^2  (the alternative printed form)
double f_gue_painleve_variant(double s, const HastingsMcLeodSolution& soln, int variant);

/// Which variant f_gue_painleve uses, as a human-readable tag.
std::string f_gue_painleve_selected_variant();

} // namespace airykit
