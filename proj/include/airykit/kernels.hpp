#pragma once

#include <functional>
#include <vector>

#include "airykit/fredholm.hpp"
#include "airykit/linalg.hpp"
#include "airykit/quadrature.hpp"

namespace airykit {

/// Times/levels/interval bundle for multi-time formulas.
struct TimeParameters {
    std::vector<double> times;  // strictly increasing
    std::vector<double> levels; // cutoffs, one per time
    double interval_left = 0.0;
    double interval_right = 0.0;

    void validate() const;
};

/// Piecewise-linear barrier g on [left, right]; at least two breakpoints.
struct BarrierFunction {
    std::vector<double> t;
    std::vector<double> g;

    double left() const { return t.front(); }
    double right() const { return t.back(); }
    double operator()(double s) const;
    /// Time reversal on its own interval.
    BarrierFunction reversed() const;
    void validate() const;
};

// --- kernel constructors ----------------------------------------------------

/// Airy kernel int_0^inf Ai(x+l) Ai(y+l) dl in Christoffel-Darboux form,
/// with the series-expanded diagonal used when |x - y| < 1e-4.
double airy_kernel(double x, double y);

/// B_s(x, y) = Ai(x + y + s).
std::function<double(double, double)> b_kernel(double s);

/// e^{s Delta} B_0 kernel: e^{2s^3/3 + s(x+y)} Ai(x + y + s^2), any real s.
std::function<double(double, double)> heat_b0(double s);

/// Kernel of e^{-(r-l)H} as displayed for [l, r]:
/// e^{lx - ry + (r^3-l^3)/3} e^{-(x-y)^2/4(r-l)} / sqrt(4 pi (r-l)).
/// For l = -r this is the translation-invariant kernel; products over
/// consecutive intervals telescope exactly.
std::function<double(double, double)> mehler_h(double l, double r);

/// Translation-invariant e^{-sH} kernel, s > 0 (mehler_h(-s/2, s/2)).
std::function<double(double, double)> exp_minus_h(double s);

/// Kernel of e^{tH} K_Ai for t >= 0: int_0^inf e^{-t l} Ai(x+l) Ai(y+l) dl.
/// Negative t is an argument error (compose with mehler_h instead).
std::function<double(double, double)> exp_h_kai(double t);

/// int_0^inf e^{c l} Ai(x+l) Ai(y+l) dl for any real c (the positive
/// spectral part of e^{-cH}); superexponential Airy decay always wins.
double airy_lambda_integral(double c, double x, double y);

/// Negative spectral part: int_0^inf e^{-c mu} Ai(x-mu) Ai(y-mu) dmu, c > 0.
/// Equals e^{-cH}(x,y) - airy_lambda_integral(c, x, y).
double airy_negative_mode_integral(double c, double x, double y);

/// Theta_L for the parabolic barrier t^2 + m on [-L, L]:
/// Pbar (e^{-2LH} - R_L) Pbar on (-inf, m+L^2]^2, explicit formulas.
std::function<double(double, double)> theta_parabolic(double L, double m);

/// The reflection term R_L(x,y) of theta_parabolic.
double theta_parabolic_reflection(double L, double m, double x, double y);

/// Heat kernel on (-inf, m) killed at m (method of images), time t > 0:
/// [e^{-(x-y)^2/4t} - e^{-(x+y-2m)^2/4t}] / sqrt(4 pi t) for x, y < m.
std::function<double(double, double)> killed_heat(double m, double t);

/// Crossover kernel K_alpha = K^1_alpha + K^2_alpha by direct quadrature of
/// the lambda integrals.  Throws if the truncated integrand has not started
/// decaying at the cutoff.
std::function<double(double, double)> k_2to1_alpha(double alpha);

/// Only the K^2 part (a shifted Airy kernel).
double k_2to1_alpha_k2(double alpha, double x, double y);

/// Conjugated crossover kernel for alpha > 0:
/// e^{-alpha(x-y)} K_alpha(x,y) = Bt0(x,y) - e^{-alpha(x-y)}(R_alpha - K^2),
/// where Bt0(x,y) = 2^{-1/3} Ai(2^{-1/3}(x+y)) and R_alpha is the damped
/// remainder int_0^inf e^{-2 alpha l} Ai(x+c+l) Ai(y+c-l) dl, c = alpha^2.
/// Same determinants as k_2to1_alpha, tame entries at any alpha.
std::function<double(double, double)> k_2to1_alpha_conjugated(double alpha);

/// psi_{t,m}(x) = 2 e^{t^3+(m+x)t} [Ai'(m+t^2+x) + t Ai(m+t^2+x)].
double psi_endpoint(double t, double m, double x);

/// Rank-one kernel Psi_{t,m}(x,y) = 2^{1/3} psi_{t,m}(2^{1/3}x) psi_{-t,m}(2^{1/3}y).
std::function<double(double, double)> psi_rank1(double t, double m);

/// Bt_m(x,y) = 2^{-1/3} Ai(2^{-1/3}(x + y + 2m))  (the reflected-composition
/// kernel of the parabolic-barrier limit).
double b_tilde(double m, double x, double y);

/// Closed form of int_R e^{p l} Ai(a+l) Ai(b-l) dl
/// = 2^{-1/3} e^{p(b-a)/2} Ai(2^{-1/3}(a+b) - 2^{-4/3} p^2).
double airy_exp_cross_integral(double p, double a, double b);

// --- extended kernels -------------------------------------------------------

/// Extended Airy_2 kernel on {u_1..u_n} x R (two-branch definition).
ExtendedKernel extended_airy2(const TimeParameters& params);

/// Extended Airy_1 kernel (Gaussian subtraction + Airy term); carries the
/// default conjugation weight (theta = 0.5) since heat blocks are present.
ExtendedKernel extended_airy1(const TimeParameters& params);

// --- discrete barrier products ----------------------------------------------

enum class BarrierProcess { airy2, airy1 };

/// The n-fold product Pbar_{gh(t_1)} e^{(t_1-t_2)H} ... Pbar_{gh(t_n)}
/// (resp. with e^{s Delta} for airy1) discretized by Nystrom on a shared
/// grid; gh is the time-reversed barrier, applied internally.
class BarrierProductKernel {
  public:
    BarrierProductKernel(const BarrierFunction& g, int n_mesh, BarrierProcess process,
                         int grid_order = 24);

    double eval(double x, double y) const;
    /// Weighted product matrix on the internal grid (w^{1/2} K w^{1/2} form).
    const Matrix& weighted_matrix() const { return prod_; }
    const QuadratureRule& grid() const { return grid_; }
    const std::vector<double>& mesh_times() const { return times_; }
    const std::vector<double>& mesh_levels() const { return levels_; }
    BarrierProcess process() const { return process_; }
    double span() const { return times_.back() - times_.front(); }

    /// Telescoped difference (free product) - (masked product) on the grid,
    /// in weighted form; every term passes through an above-barrier
    /// projection, so entries stay at the scale of the free semigroup.
    Matrix weighted_free_minus_masked() const;

  private:
    Matrix factor_matrix(double s) const; // propagator over time step s

    BarrierProcess process_;
    std::vector<double> times_, levels_;
    QuadratureRule grid_;
    Matrix prod_; // masked product, weighted form
};

} // namespace airykit
