#pragma once

// Composite Gauss-Legendre rules on [0, X]: geometric panels towards the
// origin (to resolve x^{2 alpha + 1}), uniform panels beyond 1.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cth {

struct GaussLegendreRule {
    std::vector<double> nodes;   // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
inline GaussLegendreRule gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
    GaussLegendreRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                const double jj = static_cast<double>(j);
                p0 = ((2.0 * jj + 1.0) * z * p1 - jj * p2) / (jj + 1.0);
            }
            dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute the derivative at the converged root
        double p0 = 1.0, p1 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double p2 = p1;
            p1 = p0;
            const double jj = static_cast<double>(j);
            p0 = ((2.0 * jj + 1.0) * z * p1 - jj * p2) / (jj + 1.0);
        }
        dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

/// Nodes and weights of a quadrature rule for plain Lebesgue measure on
/// [0, upper]. Used for both x (spatial) and lambda (spectral) grids; any
/// measure density is applied explicitly by the caller.
struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    double upper = 0.0;

    std::size_t size() const { return nodes.size(); }
    bool operator==(const QuadratureGrid&) const = default;
};

struct SpatialGrid : QuadratureGrid {
    bool operator==(const SpatialGrid&) const = default;
};
struct SpectralGrid : QuadratureGrid {
    bool operator==(const SpectralGrid&) const = default;
};

struct PanelLayout {
    double upper = 10.0;          // truncation X_max or Lambda_max
    double panel_width = 0.25;    // uniform panel width beyond `geometric_top`
    std::size_t points = 16;      // Gauss-Legendre points per panel
    std::size_t geometric_levels = 8;
    double geometric_top = 1.0;   // panels [top 2^{-k-1}, top 2^{-k}] below this
};

namespace detail {

inline std::vector<std::pair<double, double>> panels(const PanelLayout& layout) {
    if (!(layout.upper > 0.0) || !(layout.panel_width > 0.0))
        throw std::invalid_argument("quadrature: upper and panel_width must be positive");
    std::vector<std::pair<double, double>> out;
    const double top = std::min(layout.geometric_top, layout.upper);
    if (layout.geometric_levels == 0) {
        out.emplace_back(0.0, top);
    } else {
        double lo = top * std::ldexp(1.0, -static_cast<int>(layout.geometric_levels));
        out.emplace_back(0.0, lo);
        for (std::size_t k = 0; k < layout.geometric_levels; ++k) {
            out.emplace_back(lo, 2.0 * lo);
            lo *= 2.0;
        }
        out.back().second = top;
    }
    if (layout.upper > top) {
        const double span = layout.upper - top;
        const auto count = static_cast<std::size_t>(std::ceil(span / layout.panel_width - 1e-12));
        const double h = span / static_cast<double>(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double a = top + h * static_cast<double>(i);
            const double b = (i + 1 == count) ? layout.upper : a + h;
            out.emplace_back(a, b);
        }
    }
    return out;
}

inline QuadratureGrid build(const PanelLayout& layout) {
    const auto rule = gauss_legendre(layout.points);
    QuadratureGrid g;
    g.upper = layout.upper;
    for (auto [a, b] : panels(layout)) {
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            g.nodes.push_back(mid + half * rule.nodes[i]);
            g.weights.push_back(half * rule.weights[i]);
        }
    }
    return g;
}

} // namespace detail

inline SpatialGrid make_spatial_grid(const PanelLayout& layout) {
    SpatialGrid g;
    static_cast<QuadratureGrid&>(g) = detail::build(layout);
    return g;
}

inline SpectralGrid make_spectral_grid(const PanelLayout& layout) {
    SpectralGrid g;
    static_cast<QuadratureGrid&>(g) = detail::build(layout);
    return g;
}

/// Default layouts for a (X_max, Lambda_max) pair: one oscillation of the
/// fastest character per 16-point panel on either side.
inline PanelLayout spatial_layout(double x_max, double lambda_max, std::size_t points = 16) {
    PanelLayout l;
    l.upper = x_max;
    l.points = points;
    l.panel_width = std::min(1.0, 2.0 * std::numbers::pi / lambda_max);
    return l;
}

inline PanelLayout spectral_layout(double x_max, double lambda_max, std::size_t points = 16) {
    PanelLayout l;
    l.upper = lambda_max;
    l.points = points;
    l.panel_width = std::min(1.0, 2.0 * std::numbers::pi / x_max);
    return l;
}

} // namespace cth
