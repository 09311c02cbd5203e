#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "airykit/linalg.hpp"
#include "airykit/quadrature.hpp"

namespace airykit {

/// Real kernel K(x, y) of an integral operator, together with domain
/// metadata, a symmetry flag and an optional stabilizing conjugation
/// applied as e^{log_w(x)} K(x,y) e^{-log_w(y)}.  Conjugation leaves every
/// determinant unchanged; it only reshapes the discretized matrix.
struct Kernel {
    std::function<double(double, double)> eval;
    std::string domain = "R";
    bool symmetric = false;
    std::function<double(double)> log_weight; // optional

    double operator()(double x, double y) const
    {
        double v = eval(x, y);
        if (log_weight) v *= std::exp(log_weight(x) - log_weight(y));
        return v;
    }
};

/// Block kernel indexed by (time index, space point) pairs; levels[i] is the
/// lower cutoff of the i-th copy of the line (the indicator f of the fdd
/// formulas).
struct ExtendedKernel {
    std::vector<double> times;
    std::vector<double> levels;
    std::function<double(std::size_t, double, std::size_t, double)> block_eval;
    double conjugation_theta = 0.0; // weight e^{theta x} within blocks
};

/// Weighted Nystrom matrix entries w_i^{1/2} K(x_i, x_j) w_j^{1/2} plus
/// provenance.
struct NystromMatrix {
    Matrix m;
    std::string kernel_id;
    std::size_t rule_size = 0;
};

NystromMatrix nystrom_matrix(const Kernel& k, const QuadratureRule& rule);

/// det(I - K) on the rule's domain via dense LU of I - NystromMatrix.
double nystrom_det(const Kernel& k, const QuadratureRule& rule);

/// Partial sum 1 + sum_{n<=order} (-1)^n/n! int det[K(x_i,x_j)] of the
/// series for det(I - K), by direct quadrature; a test oracle for small
/// kernels.  order must be in 1..4.
double fredholm_series(const Kernel& k, const QuadratureRule& rule, int order);

/// Block determinant det(I - f K f) for an extended kernel; rules[i] must be
/// supported on (levels[i], inf).  With one time this reduces exactly to
/// nystrom_det.
double nystrom_det_block(const ExtendedKernel& k, const std::vector<QuadratureRule>& rules);

/// <(I - K)^{-1} P f, P g> via one linear solve against the Nystrom matrix.
/// Throws std::runtime_error with a condition estimate when the discretized
/// system is singular.
double resolvent_bilinear(const Kernel& k, const std::function<double(double)>& f,
                          const std::function<double(double)>& g, const QuadratureRule& rule);

/// Sum of singular values of the Nystrom matrix; diagnostic proxy for the
/// trace norm.
double trace_norm_estimate(const Kernel& k, const QuadratureRule& rule);

/// Determinant with a self-convergence estimate: evaluated at the rule built
/// by make_rule(order) and make_rule(2*order); the increment is reported.
struct DetResult {
    double value = 0.0;
    double error_estimate = 0.0;
};
DetResult converged_det(const Kernel& k, const std::function<QuadratureRule(int)>& make_rule,
                        int order);

/// Clamp a probability-valued determinant: values in [-1e-10, 0) clamp to 0
/// with a diagnostic counter; anything more negative throws.
double clamp_probability(double det);

/// Number of clamp events since process start (diagnostic).
long clamp_diagnostic_count();

} // namespace airykit
