#include "airykit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>

namespace airykit {

namespace {

struct BaseRule {
    std::vector<double> x; // nodes on [-1, 1]
    std::vector<double> w;
};

// Newton iteration on P_n with the three-term recurrence; tolerance 1e-15.
BaseRule compute_base(int n)
{
    BaseRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 120; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

std::string cache_path(int n)
{
    const char* dir = std::getenv("AIRYKIT_CACHE_DIR");
    if (!dir || !*dir) return {};
    return std::string(dir) + "/gauss_legendre_" + std::to_string(n) + ".txt";
}

bool load_cached(int n, BaseRule* out)
{
    const std::string path = cache_path(n);
    if (path.empty()) return false;
    std::ifstream in(path);
    if (!in) return false;
    BaseRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i)
        if (!(in >> r.x[i] >> r.w[i])) return false;
    double sum = 0.0;
    for (double w : r.w) sum += w;
    if (std::abs(sum - 2.0) > 1e-12) return false; // stale or corrupt
    *out = std::move(r);
    return true;
}

void store_cached(int n, const BaseRule& r)
{
    const std::string path = cache_path(n);
    if (path.empty()) return;
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) return;
        out.precision(17);
        for (int i = 0; i < n; ++i) out << r.x[i] << ' ' << r.w[i] << '\n';
    }
    std::rename(tmp.c_str(), path.c_str());
}

const BaseRule& base_rule(int n)
{
    static std::shared_mutex mtx;
    static std::map<int, BaseRule> cache;
    {
        std::shared_lock lock(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    BaseRule r;
    if (!load_cached(n, &r)) {
        r = compute_base(n);
        store_cached(n, r);
    }
    std::unique_lock lock(mtx);
    return cache.emplace(n, std::move(r)).first->second;
}

// Tail bound for Airy-type integrands: upper truncation point such that the
// omitted part of int Ai^2 is below 1e-14.  For s > 0 the decay has already
// set in and the supported length shrinks.
double airy_truncation(double s)
{
    if (s <= 0.0) return 16.0;
    return s + std::max(4.0, 16.0 - s);
}

} // namespace

QuadratureRule gauss_legendre(int order, double a, double b)
{
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("gauss_legendre: need finite a < b");
    const BaseRule& base = base_rule(order);
    QuadratureRule r;
    r.a = a;
    r.b = b;
    r.order = order;
    r.nodes.resize(order);
    r.weights.resize(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < order; ++i) {
        r.nodes[i] = mid + half * base.x[i];
        r.weights[i] = half * base.w[i];
    }
    return r;
}

QuadratureRule composite_rule(int order, const std::vector<double>& breakpoints)
{
    if (breakpoints.size() < 2) throw std::invalid_argument("composite_rule: need >= 2 breakpoints");
    QuadratureRule r;
    r.a = breakpoints.front();
    r.b = breakpoints.back();
    r.order = order;
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        if (!(breakpoints[k] < breakpoints[k + 1]))
            throw std::invalid_argument("composite_rule: breakpoints must increase");
        QuadratureRule panel = gauss_legendre(order, breakpoints[k], breakpoints[k + 1]);
        r.nodes.insert(r.nodes.end(), panel.nodes.begin(), panel.nodes.end());
        r.weights.insert(r.weights.end(), panel.weights.begin(), panel.weights.end());
    }
    return r;
}

QuadratureRule semi_infinite_rule(double s, int order, const DomainMap& map)
{
    if (order < 4) throw std::invalid_argument("semi_infinite_rule: order must be >= 4");
    if (!std::isfinite(s)) throw std::invalid_argument("semi_infinite_rule: non-finite s");

    switch (map.kind) {
    case DomainMap::Kind::truncation: {
        const double hi = std::isnan(map.cut_high) ? airy_truncation(s) : map.cut_high;
        if (!(hi > s)) throw std::invalid_argument("semi_infinite_rule: empty interval");
        return gauss_legendre(order, s, hi);
    }
    case DomainMap::Kind::rational: {
        // x = s + c t / (1 - t), t in (0, 1); dx = c / (1-t)^2 dt.
        const double c = std::isnan(map.cut_high) ? 6.0 : map.cut_high;
        QuadratureRule t = gauss_legendre(order, 0.0, 1.0);
        QuadratureRule r;
        r.a = s;
        r.b = std::numeric_limits<double>::infinity();
        r.order = order;
        r.nodes.resize(t.size());
        r.weights.resize(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double u = t.nodes[i];
            r.nodes[i] = s + c * u / (1.0 - u);
            r.weights[i] = t.weights[i] * c / ((1.0 - u) * (1.0 - u));
            if (!std::isfinite(r.nodes[i]) || !std::isfinite(r.weights[i]))
                throw std::runtime_error("semi_infinite_rule: map produced non-finite node");
        }
        return r;
    }
    case DomainMap::Kind::exponential: {
        // x = s - c log(1 - t), t in (0, 1); dx = c / (1-t) dt.
        const double c = std::isnan(map.cut_high) ? 3.0 : map.cut_high;
        QuadratureRule t = gauss_legendre(order, 0.0, 1.0);
        QuadratureRule r;
        r.a = s;
        r.b = std::numeric_limits<double>::infinity();
        r.order = order;
        r.nodes.resize(t.size());
        r.weights.resize(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double u = t.nodes[i];
            r.nodes[i] = s - c * std::log1p(-u);
            r.weights[i] = t.weights[i] * c / (1.0 - u);
            if (!std::isfinite(r.nodes[i]) || !std::isfinite(r.weights[i]))
                throw std::runtime_error("semi_infinite_rule: map produced non-finite node");
        }
        return r;
    }
    }
    throw std::logic_error("semi_infinite_rule: unknown map kind");
}

QuadratureRule full_line_rule(double lo, double hi, int order_per_panel,
                              const std::vector<double>& cuts, double max_panel_width)
{
    if (!(lo < hi)) throw std::invalid_argument("full_line_rule: need lo < hi");
    std::vector<double> brk{lo, hi};
    for (double c : cuts)
        if (c > lo && c < hi) brk.push_back(c);
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              brk.end());
    QuadratureRule r;
    r.a = brk.front();
    r.b = brk.back();
    r.order = order_per_panel;
    for (std::size_t k = 0; k + 1 < brk.size(); ++k) {
        const double w = brk[k + 1] - brk[k];
        const int pieces = std::max(1, static_cast<int>(std::ceil(w / max_panel_width)));
        for (int p = 0; p < pieces; ++p) {
            const double a = brk[k] + w * p / pieces;
            const double b = brk[k] + w * (p + 1) / pieces;
            // node density proportional to width so narrow cut panels stay cheap
            const int ord = std::max(
                6, static_cast<int>(std::ceil(order_per_panel * (b - a) / max_panel_width)));
            QuadratureRule panel = gauss_legendre(ord, a, b);
            r.nodes.insert(r.nodes.end(), panel.nodes.begin(), panel.nodes.end());
            r.weights.insert(r.weights.end(), panel.weights.begin(), panel.weights.end());
        }
    }
    return r;
}

} // namespace airykit
