#include "airykit/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "airykit/airy.hpp"

namespace airykit {

namespace {

constexpr double kCbrt4 = 1.5874010519681994748; // 4^{1/3}
constexpr double kSqrt8Pi = 5.0132565492620005; // sqrt(8 pi)

Kernel airy_kernel_obj()
{
    Kernel k;
    k.eval = [](double x, double y) { return airy_kernel(x, y); };
    k.domain = "K_Ai";
    k.symmetric = true;
    return k;
}

// Scale the node budget with the interval length (16 is the baseline span).
int scaled_order(int order, double span)
{
    return std::max(order, static_cast<int>(std::lround(order * span / 16.0)));
}

// Simpson-type integration on a uniform grid (any length >= 2).
double integrate_uniform(double h, const std::vector<double>& v)
{
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    double s = 0.0;
    std::size_t i = 0;
    while (i + 2 < n) {
        s += h / 3.0 * (v[i] + 4.0 * v[i + 1] + v[i + 2]);
        i += 2;
    }
    if (i + 2 == n) s += 0.5 * h * (v[n - 2] + v[n - 1]); // odd tail
    return s;
}

Matrix weighted_kernel_matrix(const QuadratureRule& rows, const QuadratureRule& cols,
                              const std::function<double(double, double)>& k)
{
    Matrix m(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double swi = std::sqrt(rows.weights[i]);
        for (std::size_t j = 0; j < cols.size(); ++j)
            m(i, j) = swi * k(rows.nodes[i], cols.nodes[j]) * std::sqrt(cols.weights[j]);
    }
    return m;
}

Matrix mask_rows(Matrix m, const QuadratureRule& rule, double level, bool below)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const bool keep = below ? rule.nodes[i] <= level : rule.nodes[i] > level;
        if (!keep)
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = 0.0;
    }
    return m;
}

double det_i_minus(const Matrix& mw)
{
    Matrix a = Matrix::identity(mw.rows());
    a -= mw;
    return lu_factor(std::move(a)).determinant();
}

} // namespace

// --- Tracy-Widom -------------------------------------------------------------

double f_gue(double s, const EngineOptions& opts)
{
    if (!std::isfinite(s)) throw std::invalid_argument("f_gue: non-finite s");
    if (s < -12.0) return 0.0;
    const QuadratureRule rule =
        semi_infinite_rule(s, scaled_order(opts.order, std::max(s, 0.0) + 16.0 - s), opts.map);
    const double d = nystrom_det(airy_kernel_obj(), rule);
    return std::min(clamp_probability(d), 1.0 + 1e-10);
}

double f_goe(double s, const EngineOptions& opts)
{
    if (!std::isfinite(s)) throw std::invalid_argument("f_goe: non-finite s");
    if (s < -20.0) return 0.0;
    const double span = 16.0 + std::max(0.0, -s);
    Kernel k;
    k.eval = b_kernel(s);
    k.domain = "B_s";
    k.symmetric = true;
    DomainMap map = opts.map;
    if (map.kind == DomainMap::Kind::truncation && std::isnan(map.cut_high)) map.cut_high = span;
    const QuadratureRule rule = semi_infinite_rule(0.0, scaled_order(opts.order, span), map);
    return std::min(clamp_probability(nystrom_det(k, rule)), 1.0 + 1e-10);
}

double det_ps_b0_ps(double s, const EngineOptions& opts)
{
    const double span = 16.0 + std::max(0.0, -2.0 * s);
    Kernel k;
    k.eval = b_kernel(0.0);
    k.domain = "B_0";
    k.symmetric = true;
    DomainMap map = opts.map;
    if (map.kind == DomainMap::Kind::truncation && std::isnan(map.cut_high))
        map.cut_high = s + span;
    const QuadratureRule rule = semi_infinite_rule(s, scaled_order(opts.order, span), map);
    return clamp_probability(nystrom_det(k, rule));
}

double f_goe_shifted_form(double s, const EngineOptions& opts)
{
    return det_ps_b0_ps(0.5 * s, opts);
}

double f_goe_derivative(double s, const EngineOptions& opts)
{
    const double h = 1e-3;
    return (f_goe(s + h, opts) - f_goe(s - h, opts)) / (2.0 * h);
}

double f_goe_mean(const EngineOptions& opts)
{
    // E zeta_1 = int_0^inf (1 - F) - int_{-inf}^0 F, grids wide enough that
    // the omitted tails are below 1e-9.
    const double h = 0.05;
    std::vector<double> upper, lower;
    for (double s = 0.0; s <= 8.0 + 1e-12; s += h) upper.push_back(1.0 - f_goe(s, opts));
    for (double s = -14.0; s <= 0.0 + 1e-12; s += h) lower.push_back(f_goe(s, opts));
    return integrate_uniform(h, upper) - integrate_uniform(h, lower);
}

double airy1_marginal_mean(const EngineOptions& opts) { return 0.5 * f_goe_mean(opts); }

// --- finite-dimensional distributions ----------------------------------------

namespace {

double fdd_extended(const TimeParameters& params, bool airy2, const EngineOptions& opts)
{
    const ExtendedKernel k = airy2 ? extended_airy2(params) : extended_airy1(params);
    std::vector<QuadratureRule> rules;
    rules.reserve(params.times.size());
    for (double level : params.levels)
        rules.push_back(semi_infinite_rule(level, std::max(48, opts.order / 2), opts.map));
    return clamp_probability(nystrom_det_block(k, rules));
}

double fdd_boundary2(const TimeParameters& params, bool airy2, const EngineOptions& opts)
{
    const double x1 = params.levels[0], x2 = params.levels[1];
    const double u = params.times[1] - params.times[0];
    const double lo = std::min(x1, x2) - std::sqrt(4.0 * u * 27.0) - 3.0;
    const double hi = std::max({x1, x2, 0.0}) + 16.0;
    const QuadratureRule rule = full_line_rule(lo, hi, opts.mesh_order, {x1, x2}, 2.0);
    // The middle contraction runs over (-inf, x2]; its grid must reach the
    // integrand saddle at x - 2u^2 plus several Gaussian widths below the
    // determinant window, or the propagator chain leaks mass at the edge
    // and the deep rows stop cancelling.
    const QuadratureRule zr = full_line_rule(
        lo - 16.0 - 2.0 * u * u - 2.0 * std::sqrt(u), x2, opts.mesh_order, {}, 2.0);

    Matrix proj, chain_a, chain_b;
    if (airy2) {
        proj = weighted_kernel_matrix(rule, rule, [](double x, double y) {
            return airy_kernel(x, y);
        });
        chain_a = weighted_kernel_matrix(rule, zr, exp_minus_h(u));
        chain_b = weighted_kernel_matrix(zr, rule, exp_h_kai(u));
    } else {
        proj = weighted_kernel_matrix(rule, rule, b_kernel(0.0));
        chain_a = weighted_kernel_matrix(rule, zr, [u](double x, double y) {
            return std::exp(-(x - y) * (x - y) / (4.0 * u)) /
                   std::sqrt(4.0 * M_PI * u);
        });
        chain_b = weighted_kernel_matrix(zr, rule, heat_b0(-u));
    }
    chain_a = mask_rows(std::move(chain_a), rule, x1, true);
    Matrix a = proj - chain_a * chain_b;
    Matrix m = Matrix::identity(rule.size());
    m -= a;
    return clamp_probability(lu_factor(std::move(m)).determinant());
}

} // namespace

double airy2_fdd(const TimeParameters& params, FddRoute route, const EngineOptions& opts)
{
    params.validate();
    const std::size_t n = params.times.size();
    if (n == 1) {
        if (route == FddRoute::extended_kernel) return fdd_extended(params, true, opts);
        return f_gue(params.levels[0], opts); // I - P K_Ai reduces to the half line
    }
    if (n != 2) throw std::invalid_argument("airy2_fdd: n must be 1 or 2");
    if (route == FddRoute::extended_kernel) return fdd_extended(params, true, opts);
    return fdd_boundary2(params, true, opts);
}

double airy1_fdd(const TimeParameters& params, FddRoute route, const EngineOptions& opts)
{
    params.validate();
    const std::size_t n = params.times.size();
    if (n == 1) {
        if (route == FddRoute::extended_kernel) return fdd_extended(params, false, opts);
        return det_ps_b0_ps(params.levels[0], opts);
    }
    if (n != 2) throw std::invalid_argument("airy1_fdd: n must be 1 or 2");
    if (route == FddRoute::extended_kernel) return fdd_extended(params, false, opts);
    return fdd_boundary2(params, false, opts);
}

// --- crossover -----------------------------------------------------------------

double g_2to1(double alpha, double m, const EngineOptions& opts)
{
    if (!std::isfinite(alpha) || !std::isfinite(m))
        throw std::invalid_argument("g_2to1: non-finite input");
    Kernel k;
    k.symmetric = false;
    k.domain = "K_alpha";
    if (alpha > 0.0)
        k.eval = k_2to1_alpha_conjugated(alpha);
    else
        k.eval = k_2to1_alpha(alpha);
    const QuadratureRule rule = semi_infinite_rule(m, opts.order, opts.map);
    return std::min(clamp_probability(nystrom_det(k, rule)), 1.0 + 1e-10);
}

double g_2to1_sup_route_alpha0(double m, const EngineOptions& opts)
{
    // det(I - P_0 B_0 [P_m + rho_m Pbar_m] B_0 P_0) on (0, inf):
    //   B_0 P_m B_0 (u,v)          = K_Ai(u+m, v+m)
    //   B_0 rho_m Pbar_m B_0 (u,v) = int_m^inf Ai(u+w) Ai(v+2m-w) dw
    Kernel k;
    k.symmetric = false;
    k.domain = "sup_route_alpha0";
    k.eval = [m](double u, double v) {
        const double direct = airy_kernel(u + m, v + m);
        const QuadratureRule r = full_line_rule(m, m + std::max(16.0, 18.0 - u), 16, {}, 2.0);
        double refl = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i)
            refl += r.weights[i] * ai(u + r.nodes[i]) * ai(v + 2.0 * m - r.nodes[i]);
        return direct + refl;
    };
    const QuadratureRule rule = semi_infinite_rule(0.0, opts.order, opts.map);
    return clamp_probability(nystrom_det(k, rule));
}

// --- parabolic barrier ----------------------------------------------------------

namespace {

// Correction kernel sandwich for the reduced parabolic determinant:
// Corr'(x, y) = int int Ai(x+z1) e^{-Lx} [D - Pbar D Pbar](z1, z2)
//                        Ai(z2+y) e^{-Ly} dz1 dz2
// built as a matrix triple product on the half-line rule.
Matrix parabola_correction(double m, double L, const QuadratureRule& half,
                           const EngineOptions& opts)
{
    const double c = m + L * L;
    const double zlo = c - (4.0 * L * L + std::sqrt(8.0 * L * 50.0) + 18.0);
    const double zhi = c + 14.0;
    const QuadratureRule zr = full_line_rule(zlo, zhi, opts.mesh_order, {c}, 2.0);
    const std::size_t nz = zr.size(), nx = half.size();

    const double log_norm = -std::log(kSqrt8Pi * std::sqrt(L));
    Matrix d(nz, nz, 0.0);
    for (std::size_t a = 0; a < nz; ++a) {
        const double z1 = zr.nodes[a];
        for (std::size_t b = 0; b < nz; ++b) {
            const double z2 = zr.nodes[b];
            if (z1 <= c && z2 <= c) continue; // Pbar D Pbar part is subtracted away
            const double w = (z1 - c) * (z2 - c) / (2.0 * L);
            const double e_heat = 2.0 * L * L * L / 3.0 - L * (z1 + z2) -
                                  (z1 - z2) * (z1 - z2) / (8.0 * L) + log_norm;
            double log_bridge, sign = 1.0;
            if (w >= 0.0) {
                const double f = -std::expm1(-w);
                if (f <= 0.0) continue;
                log_bridge = std::log(f);
            } else {
                log_bridge = -w + std::log1p(-std::exp(w));
                sign = -1.0;
            }
            const double e = e_heat + log_bridge;
            if (e > 700.0) throw std::overflow_error("parabola_correction: kernel overflow");
            d(a, b) = e < -745.0 ? 0.0 : sign * std::exp(e) *
                                             std::sqrt(zr.weights[a] * zr.weights[b]);
        }
    }
    Matrix left(nx, nz), right(nz, nx);
    for (std::size_t i = 0; i < nx; ++i) {
        const double x = half.nodes[i];
        const double swi = std::sqrt(half.weights[i]);
        for (std::size_t a = 0; a < nz; ++a) {
            left(i, a) = swi * ai_times_exp(x + zr.nodes[a], -L * x) * std::sqrt(zr.weights[a]);
            right(a, i) = std::sqrt(zr.weights[a]) * ai_times_exp(zr.nodes[a] + x, -L * x) * swi;
        }
    }
    return left * (d * right);
}

} // namespace

double airy2_sup_parabola(double m, double L, SupRoute route, const EngineOptions& opts)
{
    if (route == SupRoute::closed_form) return f_goe(kCbrt4 * m, opts);
    if (!(L > 0.0)) throw std::invalid_argument("airy2_sup_parabola: needs L > 0");
    const QuadratureRule half = semi_infinite_rule(0.0, opts.order, opts.map);
    Matrix bt = weighted_kernel_matrix(half, half, [m](double x, double y) {
        return b_tilde(m, x, y);
    });
    bt += parabola_correction(m, L, half, opts);
    return std::min(clamp_probability(det_i_minus(bt)), 1.0 + 1e-10);
}

double airy2_sup_parabola_literal(double m, double L, const EngineOptions& opts)
{
    // det(I - K_Ai + Theta_L e^{2LH} K_Ai) assembled on a truncated line.
    // Kernel magnitudes grow like e^{2L |window|}, which limits both L and
    // the window in doubles; the truncation bias (Gaussian row decay) is
    // ~e^{-12^2/8L}, a few 1e-5 at L = 1.2.
    if (L > 1.3)
        throw std::invalid_argument("airy2_sup_parabola_literal: L too large for doubles");
    const double c = m + L * L;
    const double lo = c - 12.0 - 2.0 * std::sqrt(L);
    const double hi = std::max(c, 0.0) + 16.0;
    const QuadratureRule rule = full_line_rule(lo, hi, opts.mesh_order, {c}, 2.0);
    const QuadratureRule zr = full_line_rule(
        lo - 16.0 - 4.0 * L * L - 4.0 * std::sqrt(2.0 * L), c, opts.mesh_order, {}, 2.0);
    Matrix kai = weighted_kernel_matrix(rule, rule, [](double x, double y) {
        return airy_kernel(x, y);
    });
    Matrix theta = weighted_kernel_matrix(rule, zr, theta_parabolic(L, m));
    Matrix ehk = weighted_kernel_matrix(zr, rule, exp_h_kai(2.0 * L));
    Matrix a = kai - theta * ehk;
    Matrix id = Matrix::identity(rule.size());
    id -= a;
    return clamp_probability(lu_factor(std::move(id)).determinant());
}

// --- Airy_1 persistence ----------------------------------------------------------

double airy1_persistence(double m, double L, const EngineOptions& opts)
{
    if (!(L > 0.0)) throw std::invalid_argument("airy1_persistence: needs L > 0");
    // det(I - B0 + Lambda e^{-L Delta} B0) factored exactly as
    // det(I - G) det(I - F (I-G)^{-1} E), G = P B0 + Pbar rho B0,
    // E = Pbar (1 - rho) e^{L Delta} P, F = P e^{-L Delta} B0.
    // The line grid must reach the F (I-G)^{-1} E contraction saddle at
    // m - 2L^2; the upper grid must cover the image Gaussians centered at
    // 2m - x <= m + pad.  A conjugation weight e^{psi(x)}, psi = -L min(x-m, 0),
    // flattens the e^{-L(z+y)} growth of F so the linear solve noise cannot
    // be re-amplified (determinants are exactly invariant under it).
    const double pad = std::max(12.0 + 2.0 * std::sqrt(L), 2.0 * L * L + 6.0 * std::sqrt(L) + 4.0);
    const QuadratureRule line = full_line_rule(m - pad, m + 16.0, opts.mesh_order, {m}, 2.0);
    const QuadratureRule upper = full_line_rule(
        m, m + std::max(16.0, pad + 6.0 * std::sqrt(L) + 2.0), opts.mesh_order, {}, 2.0);
    auto psi = [m, L](double x) { return -L * std::min(x - m, 0.0); };

    Matrix g(line.size(), line.size());
    for (std::size_t i = 0; i < line.size(); ++i) {
        const double x = line.nodes[i];
        const double swi = std::sqrt(line.weights[i]);
        for (std::size_t j = 0; j < line.size(); ++j) {
            const double y = line.nodes[j];
            const double arg = x > m ? x + y : 2.0 * m - x + y;
            g(i, j) = swi * ai_times_exp(arg, psi(x) - psi(y)) * std::sqrt(line.weights[j]);
        }
    }
    const double log_gauss_norm = -0.5 * std::log(4.0 * M_PI * L);
    Matrix e(line.size(), upper.size());
    for (std::size_t i = 0; i < line.size(); ++i) {
        const double x = line.nodes[i];
        for (std::size_t a = 0; a < upper.size(); ++a) {
            const double z = upper.nodes[a];
            double v = 0.0;
            if (x <= m) {
                const double e1 = psi(x) - (x - z) * (x - z) / (4.0 * L) + log_gauss_norm;
                const double e2 = psi(x) -
                                  (2.0 * m - x - z) * (2.0 * m - x - z) / (4.0 * L) +
                                  log_gauss_norm;
                v = (e1 < -745.0 ? 0.0 : std::exp(e1)) - (e2 < -745.0 ? 0.0 : std::exp(e2));
            }
            e(i, a) = std::sqrt(line.weights[i]) * v * std::sqrt(upper.weights[a]);
        }
    }
    Matrix f(upper.size(), line.size());
    for (std::size_t a = 0; a < upper.size(); ++a) {
        const double z = upper.nodes[a];
        for (std::size_t i = 0; i < line.size(); ++i) {
            const double y = line.nodes[i];
            const double lf = -2.0 * L * L * L / 3.0 - L * (z + y) - psi(y);
            f(a, i) = std::sqrt(upper.weights[a]) * ai_times_exp(z + y + L * L, lf) *
                      std::sqrt(line.weights[i]);
        }
    }
    // E and F separately carry e^{L |x-m|}-scale humps, but their product
    // (the full conjugated operator) is uniformly tame; assemble it and take
    // one determinant rather than factoring through the upper space.
    Matrix a = g + e * f;
    Matrix ia = Matrix::identity(line.size());
    ia -= a;
    return clamp_probability(lu_factor(std::move(ia)).determinant());
}

double airy1_persistence_literal(double m, double L, const EngineOptions& opts)
{
    if (L > 1.05)
        throw std::invalid_argument("airy1_persistence_literal: L too large for doubles");
    const double pad = 11.0;
    const QuadratureRule rule = full_line_rule(m - pad, m + 16.0, opts.mesh_order, {m}, 2.0);
    const QuadratureRule zr =
        full_line_rule(m - pad - 16.0 - 2.0 * L * L, m, opts.mesh_order, {}, 2.0);
    Matrix b0 = weighted_kernel_matrix(rule, rule, b_kernel(0.0));
    Matrix lam = weighted_kernel_matrix(rule, zr, killed_heat(m, L));
    Matrix hb = weighted_kernel_matrix(zr, rule, heat_b0(-L));
    Matrix a = b0 - lam * hb;
    Matrix id = Matrix::identity(rule.size());
    id -= a;
    return clamp_probability(lu_factor(std::move(id)).determinant());
}

PersistenceFit persistence_rate(double m, const std::vector<double>& L_grid,
                                const EngineOptions& opts)
{
    if (L_grid.size() < 3)
        throw std::invalid_argument("persistence_rate: need at least 3 grid points");
    PersistenceFit fit;
    fit.L = L_grid;
    for (double L : L_grid) {
        const double p = airy1_persistence(m, L, opts);
        if (p <= 0.0) throw std::runtime_error("persistence_rate: probability underflow");
        fit.log_p.push_back(std::log(p));
    }
    // least squares for -log P = kappa L - c
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(L_grid.size());
    for (std::size_t i = 0; i < L_grid.size(); ++i) {
        sx += L_grid[i];
        sy += -fit.log_p[i];
        sxx += L_grid[i] * L_grid[i];
        sxy += L_grid[i] * -fit.log_p[i];
    }
    fit.kappa = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.kappa * sx) / n; // -c
    for (std::size_t i = 0; i < L_grid.size(); ++i) {
        const double r = std::abs(-fit.log_p[i] - (fit.kappa * L_grid[i] + fit.intercept));
        fit.max_residual = std::max(fit.max_residual, r);
    }
    return fit;
}

// --- endpoint density -------------------------------------------------------------

namespace {

struct EndpointBase {
    QuadratureRule rule;
    Matrix base_w;            // weighted B_{4^{1/3} m} matrix
    LuFactorization lu;       // of I - base_w
    double det_base = 0.0;    // F_GOE(4^{1/3} m)
};

EndpointBase endpoint_base(double m, const EngineOptions& opts)
{
    EndpointBase b;
    b.rule = semi_infinite_rule(0.0, opts.order, opts.map);
    b.base_w = weighted_kernel_matrix(b.rule, b.rule, b_kernel(kCbrt4 * m));
    Matrix a = Matrix::identity(b.rule.size());
    a -= b.base_w;
    b.lu = lu_factor(std::move(a));
    b.det_base = b.lu.determinant();
    return b;
}

double endpoint_density_from_base(double t, double m, EndpointRoute route,
                                  const EndpointBase& b)
{
    const std::size_t n = b.rule.size();
    std::vector<double> u(n), v(n);
    const double cbrt2 = 1.2599210498948731648;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = b.rule.nodes[i];
        const double sw = std::sqrt(b.rule.weights[i]);
        u[i] = sw * cbrt2 * psi_endpoint(t, m, cbrt2 * x);
        v[i] = sw * psi_endpoint(-t, m, cbrt2 * x);
    }
    if (route == EndpointRoute::resolvent) {
        const std::vector<double> sol = b.lu.solve(u);
        double bil = 0.0;
        for (std::size_t i = 0; i < n; ++i) bil += v[i] * sol[i];
        const double f = b.det_base * bil;
        return std::max(f, 0.0);
    }
    Matrix a = Matrix::identity(n);
    a -= b.base_w;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) += u[i] * v[j];
    const double f = lu_factor(std::move(a)).determinant() - b.det_base;
    if (f < -1e-9) throw std::runtime_error("endpoint density significantly negative");
    return std::max(f, 0.0);
}

} // namespace

double endpoint_joint_density(double t, double m, EndpointRoute route, const EngineOptions& opts)
{
    const EndpointBase b = endpoint_base(m, opts);
    return endpoint_density_from_base(t, m, route, b);
}

EndpointDensityGrid endpoint_marginals(const std::vector<double>& t_grid,
                                       const std::vector<double>& m_grid,
                                       const EngineOptions& opts)
{
    if (t_grid.size() < 2 || m_grid.size() < 2)
        throw std::invalid_argument("endpoint_marginals: grids too small");
    EndpointDensityGrid g;
    g.t_grid = t_grid;
    g.m_grid = m_grid;
    g.f_values = Matrix(t_grid.size(), m_grid.size());
    for (std::size_t j = 0; j < m_grid.size(); ++j) {
        const EndpointBase base = endpoint_base(m_grid[j], opts);
        for (std::size_t i = 0; i < t_grid.size(); ++i)
            g.f_values(i, j) = endpoint_density_from_base(t_grid[i], m_grid[j],
                                                          EndpointRoute::resolvent, base);
    }
    // coverage: boundary density must be negligible for the stated mass
    // tolerance.  The m_max edge rides the GOE right tail (decay length
    // ~0.15 at m = 4, boundary densities ~1e-5), so its bar is the neglected
    // tail mass rather than the raw 1e-8 used on the fast edges.
    auto check_edge = [&](double worst, double bar, const char* edge) {
        if (worst > bar)
            throw std::runtime_error(
                "endpoint_marginals: insufficient grid coverage at edge " +
                std::string(edge) + " (density " + std::to_string(worst) + ")");
    };
    double m_min_w = 0.0, m_max_w = 0.0, t_min_w = 0.0, t_max_w = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        m_min_w = std::max(m_min_w, g.f_values(i, 0));
        m_max_w = std::max(m_max_w, g.f_values(i, m_grid.size() - 1));
    }
    for (std::size_t j = 0; j < m_grid.size(); ++j) {
        t_min_w = std::max(t_min_w, g.f_values(0, j));
        t_max_w = std::max(t_max_w, g.f_values(t_grid.size() - 1, j));
    }
    check_edge(m_min_w, 1e-8, "m_min");
    check_edge(t_min_w, 1e-8, "t_min");
    check_edge(t_max_w, 1e-8, "t_max");
    check_edge(m_max_w, 2e-5, "m_max");

    const double hm = m_grid[1] - m_grid[0];
    const double ht = t_grid[1] - t_grid[0];
    g.marginal_t.resize(t_grid.size());
    std::vector<double> row(m_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        for (std::size_t j = 0; j < m_grid.size(); ++j) row[j] = g.f_values(i, j);
        g.marginal_t[i] = integrate_uniform(hm, row);
    }
    g.mass = integrate_uniform(ht, g.marginal_t);
    std::vector<double> tmp(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) tmp[i] = t_grid[i] * g.marginal_t[i];
    g.mean_t = integrate_uniform(ht, tmp) / g.mass;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double d = t_grid[i] - g.mean_t;
        tmp[i] = d * d * g.marginal_t[i];
    }
    g.variance_t = integrate_uniform(ht, tmp) / g.mass;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double d = t_grid[i] - g.mean_t;
        tmp[i] = d * d * d * d * g.marginal_t[i];
    }
    const double mu4 = integrate_uniform(ht, tmp) / g.mass;
    g.excess_kurtosis_t = mu4 / (g.variance_t * g.variance_t) - 3.0;
    return g;
}

namespace {

struct TailTable {
    std::vector<double> svals;
    std::vector<double> fend;
    double hs = 0.1;
};

// f_end on s in [3, 4.8]; mass beyond 4.8 is negligible at every checked t.
// The integral is dominated by the moderate-m shoulder (deep m is crushed by
// the F_GOE factor), where the resolvent route is purely multiplicative: the
// e^{-(4/3)t^3} decay arises from the psi-product scales, so tiny densities
// keep full relative precision.  Cached per node budget.
const TailTable& tail_table(const EngineOptions& opts)
{
    static std::mutex mtx;
    static std::map<int, TailTable> cache;
    std::lock_guard lock(mtx);
    auto it = cache.find(opts.order);
    if (it != cache.end()) return it->second;

    TailTable t;
    const double hm = 0.125;
    for (double s = 3.0; s <= 4.8 + 1e-9; s += t.hs) t.svals.push_back(s);
    t.fend.assign(t.svals.size(), 0.0);
    std::vector<EndpointBase> bases;
    std::vector<double> mgrid;
    for (double m = -8.0; m <= 1.0 + 1e-9; m += hm) {
        mgrid.push_back(m);
        bases.push_back(endpoint_base(m, opts));
    }
    for (std::size_t i = 0; i < t.svals.size(); ++i) {
        std::vector<double> col(mgrid.size());
        for (std::size_t j = 0; j < mgrid.size(); ++j)
            col[j] = endpoint_density_from_base(t.svals[i], mgrid[j],
                                                EndpointRoute::resolvent, bases[j]);
        t.fend[i] = integrate_uniform(hm, col);
    }
    return cache.emplace(opts.order, std::move(t)).first->second;
}

} // namespace

TailCheck endpoint_tail_check(double t, const EngineOptions& opts)
{
    if (t < 3.0) throw std::invalid_argument("endpoint_tail_check: needs t >= 3");
    const TailTable& table = tail_table(opts);
    const std::vector<double>& svals = table.svals;
    const std::vector<double>& fend = table.fend;
    const double hs = table.hs;
    auto tail_from = [&](double tt) {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < svals.size(); ++i) {
            if (svals[i] < tt - 1e-9) continue;
            s += 0.5 * hs * (fend[i] + fend[i + 1]);
        }
        return 2.0 * s; // both tails
    };
    auto exponent = [](double tt) { return -4.0 / 3.0 * tt * tt * tt + 2.0 * tt * tt; };
    // fit C, c3 at t = 3 and 4: log tail = log C + exponent + c3 t^{3/2}
    const double y3 = std::log(tail_from(3.0)) - exponent(3.0);
    const double y4 = std::log(tail_from(4.0)) - exponent(4.0);
    const double p3 = std::pow(3.0, 1.5), p4 = std::pow(4.0, 1.5);
    const double c3 = (y4 - y3) / (p4 - p3);
    const double logC = y3 - c3 * p3;
    TailCheck out;
    out.t = t;
    out.tail_mass = tail_from(t);
    out.bound = std::exp(logC + exponent(t) + c3 * std::pow(t, 1.5));
    out.ok = out.tail_mass <= out.bound * (1.0 + 1e-6);
    return out;
}

// --- continuum statistics -----------------------------------------------------------

namespace {

// Discrete monitoring at mesh spacing h behaves like a continuous barrier
// raised by beta sigma sqrt(h) (beta = -zeta(1/2)/sqrt(2 pi), local variance
// 2h for both processes); running the mesh with the barrier lowered by the
// same amount cancels the O(sqrt(h)) bias, and the dyadic extrapolation
// removes the remaining ~O(h) part.
BarrierFunction bg_shifted(const BarrierFunction& g, int n)
{
    const double h = (g.right() - g.left()) / (n - 1.0);
    const double shift = 0.5826 * std::sqrt(2.0 * h);
    BarrierFunction s = g;
    for (double& v : s.g) v -= shift;
    return s;
}

double continuum_once_airy2(const BarrierFunction& g0, int n, const EngineOptions& opts)
{
    const BarrierFunction g = bg_shifted(g0, n);
    BarrierProductKernel bp(g, n, BarrierProcess::airy2, opts.mesh_order);
    const Matrix delta_w = bp.weighted_free_minus_masked();
    const QuadratureRule& zr = bp.grid();
    const double u = bp.span();
    const QuadratureRule half = semi_infinite_rule(0.0, std::max(48, opts.order / 2), opts.map);
    const std::size_t nx = half.size(), nz = zr.size();
    Matrix left(nx, nz), right(nz, nx);
    for (std::size_t i = 0; i < nx; ++i) {
        const double x = half.nodes[i];
        const double swi = std::sqrt(half.weights[i]);
        for (std::size_t a = 0; a < nz; ++a) {
            const double sza = std::sqrt(zr.weights[a]);
            left(i, a) = swi * ai_times_exp(x + zr.nodes[a], -0.5 * u * x) * sza;
            right(a, i) = sza * ai_times_exp(zr.nodes[a] + x, -0.5 * u * x) * swi;
        }
    }
    // unweight delta, reweight into the sandwich: delta_w already carries
    // sqrt(w_a w_b), which is exactly the quadrature needed between left/right.
    Matrix c = left * (delta_w * right);
    for (std::size_t a = 0; a < nz; ++a) { /* weights consumed by delta_w */ }
    return clamp_probability(det_i_minus(c));
}

double continuum_once_airy1(const BarrierFunction& g0, int n, const EngineOptions& opts)
{
    const BarrierFunction g = bg_shifted(g0, n);
    // det(I - B0 + Lam_mesh e^{-u Delta} B0) with the mesh product
    // Lam_mesh = Pbar_1 G_1 ... Pbar_n, telescoped through the above-barrier
    // projections: A = sum_k prefix_{k-1} P_k heat_b0(-tau_{k-1}), where the
    // free suffixes collapse analytically by the semigroup property.  A
    // conjugation weight e^{psi}, psi = -u min(x - lvl_min, 0), keeps every
    // term at unit scale.
    const BarrierFunction gh = g.reversed();
    const double l = g.left(), r = g.right(), u = r - l;
    std::vector<double> times(n), levels(n);
    for (int i = 0; i < n; ++i) {
        times[i] = l + (r - l) * i / (n - 1.0);
        levels[i] = gh(times[i]);
    }
    const double lvl_min = *std::min_element(levels.begin(), levels.end());
    const double lvl_max = *std::max_element(levels.begin(), levels.end());
    const double pad =
        std::max(12.0 + 2.0 * std::sqrt(u), 2.0 * u * u + 6.0 * std::sqrt(u) + 4.0);
    const QuadratureRule line =
        full_line_rule(lvl_min - pad, lvl_max + 16.0, opts.mesh_order, levels, 2.0);
    const std::size_t nn = line.size();
    auto psi = [lvl_min, u](double x) { return -u * std::min(x - lvl_min, 0.0); };

    auto heat_step = [&](double s) {
        Matrix h(nn, nn);
        const double norm = -0.5 * std::log(4.0 * M_PI * s);
        for (std::size_t i = 0; i < nn; ++i) {
            const double x = line.nodes[i];
            for (std::size_t j = 0; j < nn; ++j) {
                const double y = line.nodes[j];
                const double ex = psi(x) - psi(y) - (x - y) * (x - y) / (4.0 * s) + norm;
                h(i, j) = ex < -745.0 ? 0.0
                                      : std::exp(ex) *
                                            std::sqrt(line.weights[i] * line.weights[j]);
            }
        }
        return h;
    };
    auto hb_matrix = [&](double tau) { // conjugated heat_b0(-tau), tau >= 0
        Matrix h(nn, nn);
        for (std::size_t i = 0; i < nn; ++i) {
            const double z = line.nodes[i];
            for (std::size_t j = 0; j < nn; ++j) {
                const double y = line.nodes[j];
                const double lf =
                    psi(z) - psi(y) - 2.0 * tau * tau * tau / 3.0 - tau * (z + y);
                h(i, j) = ai_times_exp(z + y + tau * tau, lf) *
                          std::sqrt(line.weights[i] * line.weights[j]);
            }
        }
        return h;
    };
    auto mask = [&](Matrix mm, double level, bool below) {
        for (std::size_t i = 0; i < nn; ++i) {
            const bool keep = below ? line.nodes[i] <= level : line.nodes[i] > level;
            if (!keep)
                for (std::size_t j = 0; j < nn; ++j) mm(i, j) = 0.0;
        }
        return mm;
    };

    Matrix a(nn, nn, 0.0);
    Matrix prefix = Matrix::identity(nn);
    for (int k = 0; k < n; ++k) {
        const double tau = times[k] - times[0];
        Matrix term = prefix * mask(hb_matrix(tau), levels[k], false);
        a += term;
        if (k + 1 < n)
            prefix = prefix * mask(heat_step(times[k + 1] - times[k]), levels[k], true);
    }
    Matrix ia = Matrix::identity(nn);
    ia -= a;
    return clamp_probability(lu_factor(std::move(ia)).determinant());
}

} // namespace

ContinuumResult continuum_barrier_prob(BarrierProcess process, const BarrierFunction& g,
                                       int n_mesh, const EngineOptions& opts)
{
    g.validate();
    if (n_mesh < 2) throw std::invalid_argument("continuum_barrier_prob: n_mesh must be >= 2");
    const int finest = std::min(n_mesh, 64);
    std::vector<int> ladder{finest};
    if (finest / 2 >= 4) ladder.insert(ladder.begin(), finest / 2);
    if (finest / 4 >= 4) ladder.insert(ladder.begin(), finest / 4);
    std::vector<double> vals;
    for (int n : ladder)
        vals.push_back(process == BarrierProcess::airy2 ? continuum_once_airy2(g, n, opts)
                                                        : continuum_once_airy1(g, n, opts));
    ContinuumResult out;
    out.value_finest = vals.back();
    if (vals.size() == 3) {
        const double d1 = vals[1] - vals[0], d2 = vals[2] - vals[1];
        if (std::abs(d2) > 1e-14 && d1 / d2 > 1.05) {
            const double rate = std::log2(d1 / d2);
            out.fitted_rate = rate;
            out.value = vals[2] + d2 / (std::pow(2.0, rate) - 1.0);
            out.convergence_estimate = std::abs(out.value - vals[2]);
        } else {
            out.value = vals[2];
            out.convergence_estimate = std::abs(d2);
        }
    } else if (vals.size() == 2) {
        out.value = vals[1] + (vals[1] - vals[0]); // assume ~ first order
        out.convergence_estimate = std::abs(vals[1] - vals[0]);
    } else {
        out.value = vals[0];
        out.convergence_estimate = std::numeric_limits<double>::quiet_NaN();
    }
    if (vals.size() >= 2 && std::abs(vals.back() - vals[vals.size() - 2]) >
                                std::max(0.05, 10.0 * std::abs(out.convergence_estimate)))
        throw std::runtime_error("continuum_barrier_prob: refinement not converging");
    return out;
}

// --- tables ------------------------------------------------------------------------

DistributionTable tabulate(const std::string& which, double lo, double hi, double step,
                           const EngineOptions& opts)
{
    if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("tabulate: bad grid");
    DistributionTable t;
    t.route = which;
    t.tolerance = 1e-8; // order-doubling stability of every reported value
    for (double s = lo; s <= hi + 1e-12; s += step) {
        t.grid.push_back(s);
        if (which == "f_gue")
            t.values.push_back(f_gue(s, opts));
        else if (which == "f_goe")
            t.values.push_back(f_goe(s, opts));
        else
            throw std::invalid_argument("tabulate: unknown distribution " + which);
    }
    return t;
}

} // namespace airykit
