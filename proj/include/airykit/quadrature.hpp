#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace airykit {

/// How a semi-infinite integration domain [s, inf) is realized on a finite
/// node set.  cut_high is the truncation point (truncation kind) or the map
/// scale (rational / exponential kinds); NaN selects the Airy-decay default.
struct DomainMap {
    enum class Kind { truncation, rational, exponential };
    Kind kind = Kind::truncation;
    double cut_low = 0.0;
    double cut_high = std::numeric_limits<double>::quiet_NaN();
};

/// Nodes and positive weights on a finite interval (possibly assembled from
/// several panels).  Invariants: nodes strictly increasing inside (a, b),
/// sum of weights equals b - a up to roundoff for panel-based rules.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double a = 0.0;
    double b = 0.0;
    int order = 0; // per-panel Gauss-Legendre order

    std::size_t size() const { return nodes.size(); }

    template <typename F>
    double integrate(F&& f) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

/// Gauss-Legendre rule on [a, b]; exact for polynomials of degree 2*order-1.
/// Base nodes are cached per order (thread-safe) and affinely remapped.
QuadratureRule gauss_legendre(int order, double a, double b);

/// Composite rule: one gauss_legendre(order) panel between consecutive
/// breakpoints.  Breakpoints must be strictly increasing, at least two.
QuadratureRule composite_rule(int order, const std::vector<double>& breakpoints);

/// Rule realizing the projection onto [s, inf) for Airy-type integrands.
/// order is the total node budget.  The truncation default is
/// [s, max(s,0) + 16]: the omitted tail of Airy-squared integrands is below
/// 1e-14 there.
QuadratureRule semi_infinite_rule(double s, int order, const DomainMap& map = {});

/// Composite panels on [lo, hi] split at the given interior cut points, with
/// roughly uniform panel widths of at most max_panel_width.  Used for
/// full-line operators whose projections must fall on panel boundaries.
QuadratureRule full_line_rule(double lo, double hi, int order_per_panel,
                              const std::vector<double>& cuts, double max_panel_width = 2.0);

} // namespace airykit
