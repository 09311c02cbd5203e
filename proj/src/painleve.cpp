#include "airykit/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "airykit/airy.hpp"
#include "airykit/quadrature.hpp"

namespace airykit {

namespace {

double left_asymptote(double s)
{
    // q(s) = sqrt(-s/2) (1 + s^{-3}/8 - (73/128) s^{-6} + ...), s << 0
    const double s3 = s * s * s;
    return std::sqrt(-0.5 * s) * (1.0 + 1.0 / (8.0 * s3) - 73.0 / (128.0 * s3 * s3));
}

double rhs(double s, double q) { return 2.0 * q * q * q + s * q; }
double rhs_dq(double s, double q) { return 6.0 * q * q + s; }

// Solve tridiagonal system in place (Thomas).
void thomas(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
            std::vector<double>& d)
{
    const std::size_t n = b.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    d[n - 1] /= b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

// Numerov residual vector for interior points of y on the uniform grid.
double residual_norm(const std::vector<double>& s, const std::vector<double>& y, double h,
                     std::vector<double>* out)
{
    const std::size_t n = y.size();
    const double h12 = h * h / 12.0;
    double nrm = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = y[i + 1] - 2.0 * y[i] + y[i - 1] -
                         h12 * (rhs(s[i + 1], y[i + 1]) + 10.0 * rhs(s[i], y[i]) +
                                rhs(s[i - 1], y[i - 1]));
        (*out)[i - 1] = r;
        nrm = std::max(nrm, std::abs(r));
    }
    return nrm;
}

void newton_solve(const std::vector<double>& s, std::vector<double>& y, double h, double tol)
{
    const std::size_t n = y.size();
    const std::size_t m = n - 2;
    const double h12 = h * h / 12.0;
    std::vector<double> r(m), lo(m), di(m), up(m), step(m);
    double nrm = residual_norm(s, y, h, &r);
    for (int it = 0; it < 80; ++it) {
        if (nrm < tol) return;
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t g = i + 1;
            lo[i] = i == 0 ? 0.0 : 1.0 - h12 * rhs_dq(s[g - 1], y[g - 1]);
            di[i] = -2.0 - 10.0 * h12 * rhs_dq(s[g], y[g]);
            up[i] = i == m - 1 ? 0.0 : 1.0 - h12 * rhs_dq(s[g + 1], y[g + 1]);
            step[i] = -r[i];
        }
        thomas(lo, di, up, step);
        double eta = 1.0;
        std::vector<double> trial = y;
        for (int bt = 0; bt < 40; ++bt) {
            for (std::size_t i = 0; i < m; ++i) trial[i + 1] = y[i + 1] + eta * step[i];
            const double trial_nrm = residual_norm(s, trial, h, &r);
            if (trial_nrm < nrm || trial_nrm < tol) {
                y = trial;
                nrm = trial_nrm;
                break;
            }
            eta *= 0.5;
            if (bt == 39)
                throw std::runtime_error("hastings_mcleod: Newton line search stalled, residual " +
                                         std::to_string(nrm));
        }
    }
    if (nrm >= tol)
        throw std::runtime_error("hastings_mcleod: collocation did not converge, residual " +
                                 std::to_string(nrm));
}

// Corrected trapezoid (4th order) cumulative integral from the right:
// int_{x_i}^{x_{i+1}} g = h/2 (g_i + g_{i+1}) + h^2/12 (g'_i - g'_{i+1}).
std::vector<double> cumulative_from_right(const std::vector<double>& g,
                                          const std::vector<double>& gp, double h)
{
    const std::size_t n = g.size();
    std::vector<double> cum(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) {
        const double piece = 0.5 * h * (g[i] + g[i + 1]) + h * h / 12.0 * (gp[i] - gp[i + 1]);
        cum[i] = cum[i + 1] + piece;
    }
    return cum;
}

} // namespace

double HastingsMcLeodSolution::value(double s) const
{
    if (s <= s_grid.front() || s >= s_grid.back()) {
        if (s >= s_grid.back()) return ai(s);
        throw std::domain_error("hastings_mcleod: s below solved grid");
    }
    const std::size_t i =
        std::min(s_grid.size() - 2,
                 static_cast<std::size_t>((s - s_grid.front()) / step));
    const double t = s - s_grid[i], h = step;
    const double y0 = q[i], d0 = q_prime[i], a0 = rhs(s_grid[i], q[i]);
    const double y1 = q[i + 1], d1 = q_prime[i + 1], a1 = rhs(s_grid[i + 1], q[i + 1]);
    const double c0 = y0, c1 = d0, c2 = 0.5 * a0;
    const double A = y1 - (c0 + c1 * h + c2 * h * h);
    const double B = d1 - (c1 + 2.0 * c2 * h);
    const double C = a1 - 2.0 * c2;
    const double h2 = h * h, h3 = h2 * h;
    const double c3 = 10.0 * A / h3 - 4.0 * B / h2 + 0.5 * C / h;
    const double c4 = -15.0 * A / (h3 * h) + 7.0 * B / h3 - C / h2;
    const double c5 = 6.0 * A / (h3 * h2) - 3.0 * B / (h3 * h) + 0.5 * C / h3;
    return c0 + t * (c1 + t * (c2 + t * (c3 + t * (c4 + t * c5))));
}

double HastingsMcLeodSolution::derivative(double s) const
{
    const double h = 1e-5;
    return (value(s + h) - value(s - h)) / (2.0 * h);
}

namespace {

double interp_cumulative(const HastingsMcLeodSolution& hm, const std::vector<double>& cum,
                         double tail, double s, const std::function<double(double)>& g)
{
    if (s >= hm.s_grid.back()) return tail; // beyond the grid only the tail remains
    if (s < hm.s_grid.front())
        throw std::domain_error("hastings_mcleod: s below solved grid");
    const std::size_t i =
        std::min(hm.s_grid.size() - 2,
                 static_cast<std::size_t>((s - hm.s_grid.front()) / hm.step));
    // cum[i] minus the piece from s_grid[i] to s by fine Gauss-Legendre
    const double si = hm.s_grid[i];
    double piece = 0.0;
    if (s > si) {
        const QuadratureRule r = gauss_legendre(8, si, s);
        piece = r.integrate(g);
    }
    return cum[i] - piece + tail;
}

} // namespace

double HastingsMcLeodSolution::moment0(double s) const
{
    return interp_cumulative(*this, cum_q2, tail_q2, s,
                             [this](double x) { return value(x) * value(x); });
}

double HastingsMcLeodSolution::moment1(double s) const
{
    return interp_cumulative(*this, cum_xq2, tail_xq2, s,
                             [this](double x) { return x * value(x) * value(x); });
}

double HastingsMcLeodSolution::q_integral(double s) const
{
    return interp_cumulative(*this, cum_q, tail_q, s, [this](double x) { return value(x); });
}

HastingsMcLeodSolution hastings_mcleod(double s_min, double s_max, double tol, int grid_per_unit)
{
    if (s_min < -40.0 || s_max < 6.0)
        throw std::invalid_argument("hastings_mcleod: need s_min >= -40 and s_max >= 6");
    const double h = 1.0 / grid_per_unit;

    // Continuation in the left endpoint; Newton is damped but the HM branch
    // is a separatrix, so we grow the domain gradually.
    std::vector<double> s, y;
    double cur_min = std::max(s_min, -2.0);
    auto build_grid = [&](double lo) {
        const std::size_t n = static_cast<std::size_t>(std::llround((s_max - lo) / h)) + 1;
        std::vector<double> grid(n);
        for (std::size_t i = 0; i < n; ++i) grid[i] = lo + h * static_cast<double>(i);
        return grid;
    };
    s = build_grid(cur_min);
    y.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        y[i] = s[i] >= 0.0 ? ai(s[i]) : ai(0.0) + (left_asymptote(std::min(s[i], -0.5)) - ai(0.0)) *
                                                      std::min(1.0, -s[i]);
    y.front() = cur_min < 0 ? left_asymptote(cur_min) : ai(cur_min);
    y.back() = ai(s_max);
    newton_solve(s, y, h, tol);

    while (cur_min > s_min + 1e-12) {
        const double next_min = std::max(s_min, cur_min - 2.0);
        std::vector<double> s2 = build_grid(next_min);
        std::vector<double> y2(s2.size());
        const std::size_t extra = s2.size() - s.size();
        for (std::size_t i = 0; i < extra; ++i) y2[i] = left_asymptote(s2[i]);
        for (std::size_t i = 0; i < s.size(); ++i) y2[extra + i] = y[i];
        y2.front() = left_asymptote(next_min);
        y2.back() = ai(s_max);
        newton_solve(s2, y2, h, tol);
        s = std::move(s2);
        y = std::move(y2);
        cur_min = next_min;
    }

    HastingsMcLeodSolution hm;
    hm.s_grid = std::move(s);
    hm.q = std::move(y);
    hm.boundary_anchor = s_max;
    hm.step = h;

    // q' by 4th-order differences (one-sided at the edges).
    const std::size_t n = hm.q.size();
    hm.q_prime.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= 2 && i + 2 < n) {
            hm.q_prime[i] = (hm.q[i - 2] - 8.0 * hm.q[i - 1] + 8.0 * hm.q[i + 1] - hm.q[i + 2]) /
                            (12.0 * h);
        } else if (i == 0) {
            hm.q_prime[i] = (-25.0 * hm.q[0] + 48.0 * hm.q[1] - 36.0 * hm.q[2] + 16.0 * hm.q[3] -
                             3.0 * hm.q[4]) /
                            (12.0 * h);
        } else if (i == 1) {
            hm.q_prime[i] = (-3.0 * hm.q[0] - 10.0 * hm.q[1] + 18.0 * hm.q[2] - 6.0 * hm.q[3] +
                             hm.q[4]) /
                            (12.0 * h);
        } else if (i + 2 == n) {
            hm.q_prime[i] = (3.0 * hm.q[n - 1] + 10.0 * hm.q[n - 2] - 18.0 * hm.q[n - 3] +
                             6.0 * hm.q[n - 4] - hm.q[n - 5]) /
                            (-12.0 * h);
        } else {
            hm.q_prime[i] = (25.0 * hm.q[n - 1] - 48.0 * hm.q[n - 2] + 36.0 * hm.q[n - 3] -
                             16.0 * hm.q[n - 4] + 3.0 * hm.q[n - 5]) /
                            (12.0 * h);
        }
    }

    // Cumulative moments with derivative-corrected trapezoid (4th order).
    std::vector<double> g(n), gp(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = hm.q[i] * hm.q[i];
        gp[i] = 2.0 * hm.q[i] * hm.q_prime[i];
    }
    hm.cum_q2 = cumulative_from_right(g, gp, h);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = hm.s_grid[i];
        gp[i] = g[i] + x * gp[i]; // d/dx of x q^2 using previous gp = (q^2)'
        g[i] = x * g[i];
    }
    hm.cum_xq2 = cumulative_from_right(g, gp, h);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = hm.q[i];
        gp[i] = hm.q_prime[i];
    }
    hm.cum_q = cumulative_from_right(g, gp, h);

    // Tails beyond s_max with q ~ Ai (relative error below e^{-(4/3) s_max^{3/2}}).
    const QuadratureRule tail_rule = gauss_legendre(32, s_max, s_max + 8.0);
    hm.tail_q2 = tail_rule.integrate([](double x) { return ai(x) * ai(x); });
    hm.tail_xq2 = tail_rule.integrate([](double x) { return x * ai(x) * ai(x); });
    hm.tail_q = tail_rule.integrate([](double x) { return ai(x); });
    return hm;
}

double f_gue_painleve_variant(double s, const HastingsMcLeodSolution& soln, int variant)
{
    if (variant == 0) {
        const double integral = soln.moment1(s) - s * soln.moment0(s);
        return std::exp(-integral);
    }
    if (variant == 1) {
        // int (x-s)^2 q^2 needs the second moment; build it on the fly.
        const double lo = std::max(s, soln.s_grid.front());
        const QuadratureRule r = gauss_legendre(200, lo, soln.boundary_anchor + 6.0);
        const double integral = r.integrate([&](double x) {
            const double q = x <= soln.boundary_anchor ? soln.value(x) : ai(x);
            return (x - s) * (x - s) * q * q;
        });
        return std::exp(-integral);
    }
    throw std::invalid_argument("f_gue_painleve_variant: variant must be 0 or 1");
}

double f_gue_painleve(double s, const HastingsMcLeodSolution& soln)
{
    return f_gue_painleve_variant(s, soln, 0);
}

std::string f_gue_painleve_selected_variant() { return "(x-s) q^2"; }

double f_goe_painleve(double s, const HastingsMcLeodSolution& soln)
{
    return std::exp(-0.5 * soln.q_integral(s)) * std::sqrt(f_gue_painleve(s, soln));
}

} // namespace airykit
