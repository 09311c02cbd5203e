#pragma once

namespace airykit {

/// Value of Ai and Ai' at a point, with an estimate of the absolute error.
struct AiryValue {
    double x = 0.0;
    double ai = 0.0;
    double ai_prime = 0.0;
    double est_abs_err = 0.0;
};

/// Airy function Ai(x) on the real line.
///
/// Absolute error is below 1e-13 for |x| <= 30 and degrades gracefully
/// (phase accumulation) towards |x| = 200.  For x > 0 the value decays like
/// e^{-(2/3)x^{3/2}} and underflows to 0 around x ~ 106; use ai_scaled for
/// kernel products at large arguments.  Non-finite input or x < -256 throws
/// std::domain_error.
double ai(double x);

/// Derivative Ai'(x), same domain contract as ai().
double ai_prime(double x);

/// Both values plus an error estimate in one call.
AiryValue airy(double x);

/// e^{(2/3)x^{3/2}} Ai(x) for x >= 0; finite for all x in [0, 1e8].
double ai_scaled(double x);

/// e^{(2/3)x^{3/2}} Ai'(x) for x >= 0.
double ai_prime_scaled(double x);

/// zeta(x) = (2/3) x^{3/2}, the decay exponent for x >= 0.
double airy_zeta(double x);

/// Ai(arg) * e^{log_factor}, evaluated without intermediate under/overflow by
/// combining log_factor with the Airy decay exponent when arg > 0.  Throws
/// std::overflow_error if the true result exceeds the double range.
double ai_times_exp(double arg, double log_factor);

/// Ai'(arg) * e^{log_factor}, guarded as in ai_times_exp.
double ai_prime_times_exp(double arg, double log_factor);

} // namespace airykit
