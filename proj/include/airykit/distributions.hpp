#pragma once

#include <string>
#include <vector>

#include "airykit/fredholm.hpp"
#include "airykit/kernels.hpp"
#include "airykit/linalg.hpp"
#include "airykit/painleve.hpp"

namespace airykit {

/// Engine-wide numerical knobs.  order is the node budget of half-line
/// determinants; doubling it must move no reported value by more than the
/// advertised tolerance.
struct EngineOptions {
    int order = 96;
    int mesh_order = 16;   // per-panel order of full-line composite rules
    DomainMap map{};       // realization of semi-infinite domains
};

struct DistributionTable {
    std::vector<double> grid;
    std::vector<double> values;
    std::string route;
    double tolerance = 0.0;
};

struct EndpointDensityGrid {
    std::vector<double> t_grid;
    std::vector<double> m_grid;
    Matrix f_values;                // f(t_i, m_j)
    std::vector<double> marginal_t; // f_end on t_grid
    double mass = 0.0;
    double mean_t = 0.0;
    double variance_t = 0.0;
    double excess_kurtosis_t = 0.0;
};

// --- Tracy-Widom laws --------------------------------------------------------

/// F_GUE(s) = det(I - P_s K_Ai P_s); returns 0 below s = -12.
double f_gue(double s, const EngineOptions& opts = {});

/// F_GOE(s) = det(I - P_0 B_s P_0).
double f_goe(double s, const EngineOptions& opts = {});

/// The shifted form det(I - P_{s/2} B_0 P_{s/2}); equals f_goe(s).
double f_goe_shifted_form(double s, const EngineOptions& opts = {});

/// det(I - P_s B_0 P_s), the building block of the form-equivalence check
/// det(I - P_s B_0 P_s) = det(I - P_0 B_{2s} P_0).
double det_ps_b0_ps(double s, const EngineOptions& opts = {});

/// Mean of F_GOE by numerical integration of the tabulated CDF.
double f_goe_mean(const EngineOptions& opts = {});

/// Mean of the Airy_1 one-point marginal, whose CDF is F_GOE(2m): equals
/// f_goe_mean() / 2.  This is the persistence barrier for which the decay
/// rate is ~2.9 (at the raw F_GOE mean it is ~6.2).
double airy1_marginal_mean(const EngineOptions& opts = {});

/// First derivative of F_GOE (central differences of the determinant).
double f_goe_derivative(double s, const EngineOptions& opts = {});

// --- finite-dimensional distributions ----------------------------------------

enum class FddRoute { extended_kernel, boundary_value };

/// P(A_2(t_1) <= x_1, ..., A_2(t_n) <= x_n), n in {1, 2}, either route.
double airy2_fdd(const TimeParameters& params, FddRoute route, const EngineOptions& opts = {});

/// P(A_1(t_1) <= x_1, ..., A_1(t_n) <= x_n), n in {1, 2}, either route.
double airy1_fdd(const TimeParameters& params, FddRoute route, const EngineOptions& opts = {});

// --- crossover marginal -------------------------------------------------------

/// G^{2->1}_alpha(m) = det(I - P_m K_alpha P_m).  alpha > 0 uses the
/// conjugated kernel (identical determinant, tame entries).
double g_2to1(double alpha, double m, const EngineOptions& opts = {});

/// Independent sup-route at alpha = 0 (variational formula over a half-line).
double g_2to1_sup_route_alpha0(double m, const EngineOptions& opts = {});

// --- variational problems -----------------------------------------------------

enum class SupRoute { finite_L, closed_form };

/// P(A_2(t) <= t^2 + m for t in [-L, L]) (finite_L) or the L -> inf closed
/// form F_GOE(4^{1/3} m) (closed_form).
double airy2_sup_parabola(double m, double L, SupRoute route, const EngineOptions& opts = {});

/// Literal full-line assembly of the finite-L parabolic determinant; valid
/// in double precision only for L <~ 1.2 (cross-check of the reduced route).
double airy2_sup_parabola_literal(double m, double L, const EngineOptions& opts = {});

/// P(A_1(t) <= m for t in [0, L]) via the killed-heat (images) factorization.
double airy1_persistence(double m, double L, const EngineOptions& opts = {});

/// Literal full-line assembly of the same determinant; double precision
/// limits it to L <~ 1.25 (cross-check).
double airy1_persistence_literal(double m, double L, const EngineOptions& opts = {});

struct PersistenceFit {
    double kappa = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    std::vector<double> L;
    std::vector<double> log_p;
};

/// Least-squares fit of -log P(m, L) = kappa L - c over L_grid.
PersistenceFit persistence_rate(double m, const std::vector<double>& L_grid,
                                const EngineOptions& opts = {});

// --- polymer endpoint ----------------------------------------------------------

enum class EndpointRoute { determinant_difference, resolvent };

/// Joint density f(t, m) of the argmax location and maximum of A_2(t) - t^2.
double endpoint_joint_density(double t, double m, EndpointRoute route,
                              const EngineOptions& opts = {});

/// Tabulate f on a grid; computes the t-marginal, mass and shape moments.
/// Throws std::runtime_error naming the violated edge when the boundary
/// density exceeds 1e-8.
EndpointDensityGrid endpoint_marginals(const std::vector<double>& t_grid,
                                       const std::vector<double>& m_grid,
                                       const EngineOptions& opts = {});

struct TailCheck {
    double t = 0.0;
    double tail_mass = 0.0;
    double bound = 0.0;
    bool ok = false;
};

/// Check int_{|s|>t} f_end <= C e^{-(4/3)t^3 + 2t^2 + c3 t^{3/2}} with C, c3
/// fitted once at t = 3 and t = 4.  t >= 3.
TailCheck endpoint_tail_check(double t, const EngineOptions& opts = {});

// --- continuum statistics -------------------------------------------------------

struct ContinuumResult {
    double value = 0.0;          // dyadically extrapolated
    double value_finest = 0.0;   // at the requested n_mesh
    double convergence_estimate = 0.0;
    double fitted_rate = 0.0;
};

/// P(process <= g on [g.left(), g.right()]) through discrete barrier
/// products with successive dyadic mesh refinements.
ContinuumResult continuum_barrier_prob(BarrierProcess process, const BarrierFunction& g,
                                       int n_mesh, const EngineOptions& opts = {});

// --- tables ---------------------------------------------------------------------

DistributionTable tabulate(const std::string& which, double lo, double hi, double step,
                           const EngineOptions& opts = {});

} // namespace airykit
