#include "airykit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "airykit/airy.hpp"

namespace airykit {

namespace {

constexpr double kSqrt4Pi = 3.5449077018110320546; // sqrt(4 pi)
constexpr double kCbrt2 = 1.2599210498948731648;   // 2^{1/3}

double gauss_kernel(double t, double dx)
{
    return std::exp(-dx * dx / (4.0 * t)) / (kSqrt4Pi * std::sqrt(t));
}

// Log-magnitude of e^{c l} Ai(x+l) Ai(y+l) at l (envelope; oscillation ignored).
double lambda_integrand_log(double c, double x, double y, double l)
{
    double s = c * l;
    if (x + l > 0) s -= airy_zeta(x + l);
    if (y + l > 0) s -= airy_zeta(y + l);
    return s;
}

} // namespace

void TimeParameters::validate() const
{
    if (times.empty() || times.size() != levels.size())
        throw std::invalid_argument("TimeParameters: times/levels mismatch");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (!(times[i] < times[i + 1]))
            throw std::invalid_argument("TimeParameters: times must strictly increase");
}

double BarrierFunction::operator()(double s) const
{
    if (t.size() < 2) throw std::invalid_argument("BarrierFunction: needs >= 2 breakpoints");
    if (s <= t.front()) return g.front();
    if (s >= t.back()) return g.back();
    auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - t.begin()) - 1;
    const double w = (s - t[k]) / (t[k + 1] - t[k]);
    return g[k] + w * (g[k + 1] - g[k]);
}

BarrierFunction BarrierFunction::reversed() const
{
    BarrierFunction r;
    const double l = t.front(), rr = t.back();
    r.t.resize(t.size());
    r.g.resize(g.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        r.t[i] = l + rr - t[t.size() - 1 - i];
        r.g[i] = g[t.size() - 1 - i];
    }
    return r;
}

void BarrierFunction::validate() const
{
    if (t.size() < 2 || t.size() != g.size())
        throw std::invalid_argument("BarrierFunction: needs >= 2 matching breakpoints");
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (!(t[i] < t[i + 1]))
            throw std::invalid_argument("BarrierFunction: breakpoints must increase");
    for (double v : g)
        if (!std::isfinite(v)) throw std::invalid_argument("BarrierFunction: non-finite value");
}

double airy_kernel(double x, double y)
{
    if (!std::isfinite(x) || !std::isfinite(y))
        throw std::domain_error("airy_kernel: non-finite input");
    if (std::abs(x - y) < 1e-4) {
        const double c = 0.5 * (x + y), d = 0.5 * (x - y);
        const AiryValue v = airy(c);
        const double diag = v.ai_prime * v.ai_prime - c * v.ai * v.ai;
        const double curv = (1.0 / 3.0) * v.ai * v.ai_prime +
                            (2.0 / 3.0) * c * v.ai_prime * v.ai_prime -
                            (2.0 / 3.0) * c * c * v.ai * v.ai;
        return diag + d * d * curv;
    }
    const AiryValue vx = airy(x), vy = airy(y);
    return (vx.ai * vy.ai_prime - vx.ai_prime * vy.ai) / (x - y);
}

std::function<double(double, double)> b_kernel(double s)
{
    return [s](double x, double y) { return ai(x + y + s); };
}

std::function<double(double, double)> heat_b0(double s)
{
    return [s](double x, double y) {
        return ai_times_exp(x + y + s * s, 2.0 * s * s * s / 3.0 + s * (x + y));
    };
}

std::function<double(double, double)> mehler_h(double l, double r)
{
    if (!(r > l)) throw std::invalid_argument("mehler_h: needs l < r");
    const double s = r - l;
    const double c0 = (r * r * r - l * l * l) / 3.0 - std::log(kSqrt4Pi * std::sqrt(s));
    return [l, r, s, c0](double x, double y) {
        const double e = l * x - r * y + c0 - (x - y) * (x - y) / (4.0 * s);
        if (e > 709.0) throw std::overflow_error("mehler_h: kernel overflows double range");
        return e < -745.0 ? 0.0 : std::exp(e);
    };
}

std::function<double(double, double)> exp_minus_h(double s)
{
    if (!(s > 0.0)) throw std::invalid_argument("exp_minus_h: needs s > 0");
    return mehler_h(-0.5 * s, 0.5 * s);
}

double airy_lambda_integral(double c, double x, double y)
{
    // Find where the envelope has dropped ~45 e-folds below its running peak.
    double peak = lambda_integrand_log(c, x, y, 0.0);
    double end = 4.0;
    for (double l = 2.0; l < 600.0; l += 2.0) {
        const double v = lambda_integrand_log(c, x, y, l);
        peak = std::max(peak, v);
        end = l;
        if (v < peak - 45.0 && c - 0.5 * (std::sqrt(std::max(x + l, 0.0)) +
                                          std::sqrt(std::max(y + l, 0.0))) *
                                           2.0 <
                                   0.0)
            break;
    }
    if (end >= 598.0)
        throw std::runtime_error("airy_lambda_integral: integrand not decaying at cutoff");
    const QuadratureRule rule = full_line_rule(0.0, end, 16, {}, 2.0);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double l = rule.nodes[i];
        const double half = 0.5 * c * l;
        s += rule.weights[i] * ai_times_exp(x + l, half) * ai_times_exp(y + l, half);
    }
    return s;
}

double airy_negative_mode_integral(double c, double x, double y)
{
    if (!(c > 0.0)) throw std::invalid_argument("airy_negative_mode_integral: needs c > 0");
    const double end = 45.0 / c + 4.0;
    const QuadratureRule rule = full_line_rule(0.0, end, 16, {}, 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double mu = rule.nodes[i];
        s += rule.weights[i] * std::exp(-c * mu) * ai(x - mu) * ai(y - mu);
    }
    return s;
}

std::function<double(double, double)> exp_h_kai(double t)
{
    if (t < 0.0) throw std::invalid_argument("exp_h_kai: t must be >= 0 (use mehler_h for t < 0)");
    if (t == 0.0) return [](double x, double y) { return airy_kernel(x, y); };
    return [t](double x, double y) { return airy_lambda_integral(-t, x, y); };
}

double theta_parabolic_reflection(double L, double m, double x, double y)
{
    const double c = m + L * L;
    const double e = -(x + y - 2.0 * c) * (x + y - 2.0 * c) / (8.0 * L) - (x + y) * L +
                     2.0 * L * L * L / 3.0 - std::log(kSqrt4Pi * std::sqrt(2.0 * L));
    if (e > 709.0) throw std::overflow_error("theta_parabolic: reflection term overflows");
    return e < -745.0 ? 0.0 : std::exp(e);
}

std::function<double(double, double)> theta_parabolic(double L, double m)
{
    if (!(L > 0.0)) throw std::invalid_argument("theta_parabolic: needs L > 0");
    const double c = m + L * L;
    auto free_heat = exp_minus_h(2.0 * L);
    return [L, c, free_heat](double x, double y) {
        if (x > c || y > c) return 0.0;
        const double bridge = -std::expm1(-(x - c) * (y - c) / (2.0 * L));
        return free_heat(x, y) * bridge;
    };
}

std::function<double(double, double)> killed_heat(double m, double t)
{
    if (!(t > 0.0)) throw std::invalid_argument("killed_heat: needs t > 0");
    return [m, t](double x, double y) {
        if (x >= m || y >= m) return 0.0;
        const double absorb = -std::expm1(-(x - m) * (y - m) / t);
        return gauss_kernel(t, x - y) * absorb;
    };
}

double k_2to1_alpha_k2(double alpha, double x, double y)
{
    const double c = std::max(0.0, alpha) * std::max(0.0, alpha);
    return airy_kernel(x + c, y + c);
}

std::function<double(double, double)> k_2to1_alpha(double alpha)
{
    if (!std::isfinite(alpha)) throw std::invalid_argument("k_2to1_alpha: non-finite alpha");
    const double c = std::max(0.0, alpha) * std::max(0.0, alpha);
    return [alpha, c](double x, double y) {
        // K^1: int_0^inf e^{2 a l} Ai(x - l + c) Ai(y + l + c) dl.
        double peak = -1e300;
        double end = 4.0;
        bool decaying = false;
        for (double l = 0.0; l < 600.0; l += 2.0) {
            double v = 2.0 * alpha * l;
            if (x - l + c > 0) v -= airy_zeta(x - l + c);
            if (y + l + c > 0) v -= airy_zeta(y + l + c);
            peak = std::max(peak, v);
            end = std::max(end, l);
            if (v < peak - 45.0) {
                decaying = true;
                break;
            }
        }
        if (!decaying)
            throw std::runtime_error("k_2to1_alpha: integrand not decaying at cutoff");
        const QuadratureRule rule = full_line_rule(0.0, end, 16, {}, 2.0);
        double k1 = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double l = rule.nodes[i];
            const double half = alpha * l;
            k1 += rule.weights[i] * ai_times_exp(x - l + c, half) * ai_times_exp(y + l + c, half);
        }
        return k1 + airy_kernel(x + c, y + c);
    };
}

double b_tilde(double m, double x, double y)
{
    return (1.0 / kCbrt2) * ai((x + y + 2.0 * m) / kCbrt2);
}

double airy_exp_cross_integral(double p, double a, double b)
{
    const double arg = (a + b - 0.5 * p * p) / kCbrt2;
    return (1.0 / kCbrt2) * ai_times_exp(arg, 0.5 * p * (b - a));
}

std::function<double(double, double)> k_2to1_alpha_conjugated(double alpha)
{
    if (!(alpha > 0.0))
        throw std::invalid_argument("k_2to1_alpha_conjugated: needs alpha > 0");
    const double c = alpha * alpha;
    return [alpha, c](double x, double y) {
        // Full-line part of K^1 collapses to e^{alpha(x-y)} Bt_0(x,y); after
        // conjugation it is Bt_0 exactly.  The rest is the damped remainder
        // and the shifted Airy kernel, both conjugated.
        const double bt = (1.0 / kCbrt2) * ai((x + y) / kCbrt2);
        // remainder: int_0^inf e^{-2 alpha mu - alpha (x-y)} Ai(x+c+mu) Ai(y+c-mu) dmu
        const double end = 45.0 / (2.0 * alpha) + 4.0;
        const QuadratureRule rule = full_line_rule(0.0, end, 16, {}, 1.0);
        double rem = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double mu = rule.nodes[i];
            const double lf = -2.0 * alpha * mu - alpha * (x - y);
            const double t2arg = y + c - mu;
            const double t2 = t2arg > 0 ? ai_times_exp(t2arg, 0.0) : ai(t2arg);
            rem += rule.weights[i] * ai_times_exp(x + c + mu, lf) * t2;
        }
        // conjugated K^2
        double k2 = airy_kernel(x + c, y + c);
        if (k2 != 0.0) {
            const double e = -alpha * (x - y);
            if (e > 709.0) throw std::overflow_error("k_2to1_alpha_conjugated: overflow");
            k2 = e < -745.0 ? 0.0 : k2 * std::exp(e);
        }
        return bt - rem + k2;
    };
}

double psi_endpoint(double t, double m, double x)
{
    const double arg = m + t * t + x;
    const double lf = t * t * t + (m + x) * t;
    return 2.0 * (ai_prime_times_exp(arg, lf) + t * ai_times_exp(arg, lf));
}

std::function<double(double, double)> psi_rank1(double t, double m)
{
    return [t, m](double x, double y) {
        return kCbrt2 * psi_endpoint(t, m, kCbrt2 * x) * psi_endpoint(-t, m, kCbrt2 * y);
    };
}

ExtendedKernel extended_airy2(const TimeParameters& params)
{
    params.validate();
    ExtendedKernel k;
    k.times = params.times;
    k.levels = params.levels;
    std::vector<double> u = params.times;
    k.block_eval = [u](std::size_t i, double x, std::size_t j, double y) {
        if (i == j) return airy_kernel(x, y);
        if (u[i] > u[j]) return airy_lambda_integral(-(u[i] - u[j]), x, y);
        const double d = u[j] - u[i];
        if (d > 3.0) return -airy_negative_mode_integral(d, x, y);
        return -exp_minus_h(d)(x, y) + airy_lambda_integral(d, x, y);
    };
    return k;
}

ExtendedKernel extended_airy1(const TimeParameters& params)
{
    params.validate();
    ExtendedKernel k;
    k.times = params.times;
    k.levels = params.levels;
    k.conjugation_theta = 0.5; // heat blocks present; default per engine policy
    std::vector<double> u = params.times;
    k.block_eval = [u](std::size_t i, double x, std::size_t j, double y) {
        const double d = u[j] - u[i]; // u' - u with row (i,x), column (j,y)
        double v = ai_times_exp(x + y + d * d, d * (x + y) + 2.0 * d * d * d / 3.0);
        if (d > 0.0) v -= gauss_kernel(d, y - x);
        return v;
    };
    return k;
}

// --- discrete barrier product ----------------------------------------------

BarrierProductKernel::BarrierProductKernel(const BarrierFunction& g, int n_mesh,
                                           BarrierProcess process, int grid_order)
    : process_(process)
{
    g.validate();
    if (n_mesh < 2) throw std::invalid_argument("discrete_barrier_product: n_mesh must be >= 2");
    const BarrierFunction gh = g.reversed(); // solve forward in time
    const double l = g.left(), r = g.right();
    times_.resize(n_mesh);
    levels_.resize(n_mesh);
    for (int i = 0; i < n_mesh; ++i) {
        times_[i] = l + (r - l) * i / (n_mesh - 1.0);
        levels_[i] = gh(times_[i]);
    }
    const double lvl_min = *std::min_element(levels_.begin(), levels_.end());
    const double lvl_max = *std::max_element(levels_.begin(), levels_.end());
    const double span = r - l;
    const double pad = std::max(8.0, 6.0 * std::sqrt(span)) + 2.0;
    std::vector<double> cuts(levels_.begin(), levels_.end());
    grid_ = full_line_rule(lvl_min - pad, lvl_max + pad, grid_order, cuts, 2.0);

    const std::size_t n = grid_.size();
    auto mask_vec = [&](double level) {
        std::vector<double> m(n);
        for (std::size_t a = 0; a < n; ++a) m[a] = grid_.nodes[a] <= level ? 1.0 : 0.0;
        return m;
    };
    // masked product Pbar_1 F_1 Pbar_2 ... F_{n-1} Pbar_n in weighted form
    Matrix prod;
    bool first = true;
    for (int k = 0; k + 1 < n_mesh; ++k) {
        Matrix f = factor_matrix(times_[k + 1] - times_[k]);
        const std::vector<double> mrow = mask_vec(levels_[k]);
        const std::vector<double> mcol = mask_vec(levels_[k + 1]);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) f(a, b) *= mrow[a] * mcol[b];
        prod = first ? std::move(f) : prod * f;
        first = false;
    }
    prod_ = std::move(prod);
}

Matrix BarrierProductKernel::factor_matrix(double s) const
{
    const std::size_t n = grid_.size();
    Matrix f(n, n);
    if (process_ == BarrierProcess::airy2) {
        auto ker = exp_minus_h(s);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                f(a, b) = std::sqrt(grid_.weights[a] * grid_.weights[b]) *
                          ker(grid_.nodes[a], grid_.nodes[b]);
    } else {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                f(a, b) = std::sqrt(grid_.weights[a] * grid_.weights[b]) *
                          gauss_kernel(s, grid_.nodes[a] - grid_.nodes[b]);
    }
    return f;
}

double BarrierProductKernel::eval(double x, double y) const
{
    // Pulls the product through one extra propagation row/column so arbitrary
    // (x, y) can be requested: Theta(x, y) row = F_1(x, .), column = F_{n-1}(., y).
    const std::size_t n = grid_.size();
    const int nm = static_cast<int>(times_.size());
    if (x > levels_.front() || y > levels_.back()) return 0.0;
    if (nm == 2) {
        const double s = times_[1] - times_[0];
        return process_ == BarrierProcess::airy2 ? exp_minus_h(s)(x, y)
                                                 : gauss_kernel(s, x - y);
    }
    // middle = Pbar_2 F_2 ... F_{n-2} Pbar_{n-1} (weighted)
    Matrix middle = Matrix::identity(n);
    for (std::size_t a = 0; a < n; ++a)
        middle(a, a) = grid_.nodes[a] <= levels_[1] ? 1.0 : 0.0;
    for (int k = 1; k + 2 < nm; ++k) {
        Matrix f = factor_matrix(times_[k + 1] - times_[k]);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                f(a, b) *= (grid_.nodes[b] <= levels_[k + 1] ? 1.0 : 0.0);
        middle = middle * f;
    }
    const double s1 = times_[1] - times_[0];
    const double s2 = times_[nm - 1] - times_[nm - 2];
    std::vector<double> row(n), col(n);
    for (std::size_t a = 0; a < n; ++a) {
        const double za = grid_.nodes[a];
        row[a] = (process_ == BarrierProcess::airy2 ? exp_minus_h(s1)(x, za)
                                                    : gauss_kernel(s1, x - za)) *
                 std::sqrt(grid_.weights[a]);
        col[a] = (process_ == BarrierProcess::airy2 ? exp_minus_h(s2)(za, y)
                                                    : gauss_kernel(s2, za - y)) *
                 std::sqrt(grid_.weights[a]);
    }
    double v = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        if (row[a] == 0.0) continue;
        double inner = 0.0;
        for (std::size_t b = 0; b < n; ++b) inner += middle(a, b) * col[b];
        v += row[a] * inner;
    }
    return v;
}

Matrix BarrierProductKernel::weighted_free_minus_masked() const
{
    const std::size_t n = grid_.size();
    const int nm = static_cast<int>(times_.size());
    auto mask = [&](int k, Matrix m, bool rows) {
        for (std::size_t a = 0; a < n; ++a) {
            const double ind = grid_.nodes[a] <= levels_[k] ? 1.0 : 0.0;
            if (rows)
                for (std::size_t b = 0; b < n; ++b) m(a, b) *= ind;
            else
                for (std::size_t b = 0; b < n; ++b) m(b, a) *= ind;
        }
        return m;
    };
    auto upper_rows = [&](int k, Matrix m) { // P_k rows (above barrier)
        for (std::size_t a = 0; a < n; ++a) {
            const double ind = grid_.nodes[a] <= levels_[k] ? 0.0 : 1.0;
            for (std::size_t b = 0; b < n; ++b) m(a, b) *= ind;
        }
        return m;
    };

    std::vector<Matrix> factors(nm - 1);
    for (int k = 0; k + 1 < nm; ++k) factors[k] = factor_matrix(times_[k + 1] - times_[k]);

    // suffix free products: suf[k] = A_k A_{k+1} ... A_{n-2} (suf[n-1] = I)
    std::vector<Matrix> suf(nm);
    suf[nm - 1] = Matrix::identity(n);
    for (int k = nm - 2; k >= 0; --k) suf[k] = factors[k] * suf[k + 1];

    Matrix delta(n, n, 0.0);
    Matrix prefix = Matrix::identity(n); // B_1 ... B_{k-1}
    for (int k = 0; k + 1 < nm; ++k) {
        // term: prefix * (P_k A_k) * suffix_{k+1}
        Matrix term = prefix * (upper_rows(k, factors[k]) * suf[k + 1]);
        delta += term;
        prefix = prefix * mask(k, factors[k], true);
    }
    // remaining: (prod of B) * P_n
    Matrix tail = prefix;
    for (std::size_t a = 0; a < n; ++a) {
        const double ind = grid_.nodes[a] <= levels_[nm - 1] ? 0.0 : 1.0;
        for (std::size_t b = 0; b < n; ++b) tail(b, a) *= ind;
    }
    delta += tail;
    return delta;
}

} // namespace airykit
