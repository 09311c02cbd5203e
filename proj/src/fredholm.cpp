#include "airykit/fredholm.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace airykit {

namespace {

std::atomic<long> g_clamp_count{0};

void check_entry(double v, double x, double y)
{
    if (!std::isfinite(v))
        throw std::runtime_error("nystrom: non-finite kernel value at (" + std::to_string(x) +
                                 ", " + std::to_string(y) + ")");
}

} // namespace

NystromMatrix nystrom_matrix(const Kernel& k, const QuadratureRule& rule)
{
    const std::size_t n = rule.size();
    NystromMatrix out;
    out.m = Matrix(n, n);
    out.rule_size = n;
    out.kernel_id = k.domain;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = std::sqrt(rule.weights[i]);
    if (k.symmetric && !k.log_weight) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                const double v = k.eval(rule.nodes[i], rule.nodes[j]);
                check_entry(v, rule.nodes[i], rule.nodes[j]);
                out.m(i, j) = sq[i] * v * sq[j];
                out.m(j, i) = out.m(i, j);
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double v = k(rule.nodes[i], rule.nodes[j]);
                check_entry(v, rule.nodes[i], rule.nodes[j]);
                out.m(i, j) = sq[i] * v * sq[j];
            }
        }
    }
    return out;
}

double nystrom_det(const Kernel& k, const QuadratureRule& rule)
{
    NystromMatrix nm = nystrom_matrix(k, rule);
    Matrix a = Matrix::identity(rule.size());
    a -= nm.m;
    return lu_factor(std::move(a)).determinant();
}

double fredholm_series(const Kernel& k, const QuadratureRule& rule, int order)
{
    if (order < 1 || order > 4)
        throw std::invalid_argument("fredholm_series: order must be in 1..4");
    const std::size_t n = rule.size();
    Matrix kv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) kv(i, j) = k(rule.nodes[i], rule.nodes[j]);
    const std::vector<double>& w = rule.weights;

    double total = 1.0;
    // n = 1
    {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += w[i] * kv(i, i);
        total -= s;
    }
    if (order >= 2) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                s += w[i] * w[j] * (kv(i, i) * kv(j, j) - kv(i, j) * kv(j, i));
        total += s / 2.0;
    }
    if (order >= 3) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = 0; l < n; ++l) {
                    const double det3 =
                        kv(i, i) * (kv(j, j) * kv(l, l) - kv(j, l) * kv(l, j)) -
                        kv(i, j) * (kv(j, i) * kv(l, l) - kv(j, l) * kv(l, i)) +
                        kv(i, l) * (kv(j, i) * kv(l, j) - kv(j, j) * kv(l, i));
                    s += w[i] * w[j] * w[l] * det3;
                }
        total -= s / 6.0;
    }
    if (order >= 4) {
        double s = 0.0;
        std::array<std::size_t, 4> id{};
        for (id[0] = 0; id[0] < n; ++id[0])
            for (id[1] = 0; id[1] < n; ++id[1])
                for (id[2] = 0; id[2] < n; ++id[2])
                    for (id[3] = 0; id[3] < n; ++id[3]) {
                        Matrix m4(4, 4);
                        for (int a = 0; a < 4; ++a)
                            for (int b = 0; b < 4; ++b) m4(a, b) = kv(id[a], id[b]);
                        s += w[id[0]] * w[id[1]] * w[id[2]] * w[id[3]] * determinant(m4);
                    }
        total += s / 24.0;
    }
    return total;
}

double nystrom_det_block(const ExtendedKernel& k, const std::vector<QuadratureRule>& rules)
{
    const std::size_t nt = k.times.size();
    if (nt == 0 || rules.size() != nt)
        throw std::invalid_argument("nystrom_det_block: times/rules length mismatch");
    std::size_t total = 0;
    std::vector<std::size_t> offset(nt, 0);
    for (std::size_t i = 0; i < nt; ++i) {
        offset[i] = total;
        total += rules[i].size();
    }
    Matrix a = Matrix::identity(total);
    const double theta = k.conjugation_theta;
    for (std::size_t bi = 0; bi < nt; ++bi) {
        for (std::size_t bj = 0; bj < nt; ++bj) {
            const QuadratureRule& ri = rules[bi];
            const QuadratureRule& rj = rules[bj];
            for (std::size_t i = 0; i < ri.size(); ++i) {
                const double x = ri.nodes[i];
                const double swi = std::sqrt(ri.weights[i]);
                for (std::size_t j = 0; j < rj.size(); ++j) {
                    const double y = rj.nodes[j];
                    double v = k.block_eval(bi, x, bj, y);
                    check_entry(v, x, y);
                    if (theta != 0.0) v *= std::exp(theta * (x - y));
                    a(offset[bi] + i, offset[bj] + j) -= swi * v * std::sqrt(rj.weights[j]);
                }
            }
        }
    }
    return lu_factor(std::move(a)).determinant();
}

double resolvent_bilinear(const Kernel& k, const std::function<double(double)>& f,
                          const std::function<double(double)>& g, const QuadratureRule& rule)
{
    NystromMatrix nm = nystrom_matrix(k, rule);
    const std::size_t n = rule.size();
    Matrix a = Matrix::identity(n);
    a -= nm.m;
    LuFactorization lu = lu_factor(std::move(a));
    if (lu.singular || lu.pivot_rcond() < 1e-14)
        throw std::runtime_error("resolvent_bilinear: singular system, rcond ~ " +
                                 std::to_string(lu.pivot_rcond()));
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = f(rule.nodes[i]);
        if (k.log_weight) v *= std::exp(k.log_weight(rule.nodes[i]));
        rhs[i] = std::sqrt(rule.weights[i]) * v;
    }
    const std::vector<double> u = lu.solve(rhs);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = g(rule.nodes[i]);
        if (k.log_weight) v *= std::exp(-k.log_weight(rule.nodes[i]));
        s += std::sqrt(rule.weights[i]) * v * u[i];
    }
    return s;
}

double trace_norm_estimate(const Kernel& k, const QuadratureRule& rule)
{
    NystromMatrix nm = nystrom_matrix(k, rule);
    const std::vector<double> sv = singular_values(std::move(nm.m));
    double s = 0.0;
    for (double v : sv) s += v;
    return s;
}

DetResult converged_det(const Kernel& k, const std::function<QuadratureRule(int)>& make_rule,
                        int order)
{
    const double d1 = nystrom_det(k, make_rule(order));
    const double d2 = nystrom_det(k, make_rule(2 * order));
    return {d2, std::abs(d2 - d1)};
}

double clamp_probability(double det)
{
    if (det >= 0.0) return det;
    if (det >= -1e-10) {
        ++g_clamp_count;
        return 0.0;
    }
    throw std::runtime_error("probability determinant is negative: " + std::to_string(det));
}

long clamp_diagnostic_count() { return g_clamp_count.load(); }

} // namespace airykit
