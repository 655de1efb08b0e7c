#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace cth {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double sse = 0.0;  // sum of squared residuals
};

/// Ordinary least squares y ~ slope * x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        f.sse += r * r;
    }
    return f;
}

/// Slope of log y against log x.
template <class Fn>
double loglog_slope(double lo, double hi, std::size_t n, Fn&& fn) {
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        const double x = lo * std::pow(hi / lo, t);
        lx[i] = std::log(x);
        ly[i] = std::log(fn(x));
    }
    return fit_line(lx, ly).slope;
}

} // namespace cth
