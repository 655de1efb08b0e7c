#pragma once

// Calibration of Plancherel densities against the L^2 isometry, power-law
// fits of the two c-function regimes, and the Plancherel / Parseval defects.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cth/density.hpp"
#include "cth/errors.hpp"
#include "cth/fit.hpp"
#include "cth/transform.hpp"

namespace cth {

struct CalibrationGrids {
    double x_max = 12.0;
    double lambda_max = 40.0;
    std::size_t points = 16;
    unsigned threads = 1;
};

/// Test functions used when none are supplied.
inline std::vector<RealFn> default_calibration_functions() {
    return {[](double x) { return std::exp(-0.5 * x * x); },
            [](double x) { return x * std::exp(-x * x); }};
}

/// C0 = ||f||^2_{L^2(A dx)} / int |f^|^2 raw dl for the first test function;
/// every further test function must reproduce C0 to 1e-3 relative.
inline SpectralDensity calibrate(const HypergroupModel& model, RealFn raw_density,
                                 const std::vector<RealFn>& test_functions,
                                 const CalibrationGrids& grids = {}) {
    if (test_functions.empty()) throw std::invalid_argument("calibrate: need at least one test function");
    HarmonicContext ctx(SpectralDensity(model, raw_density, 1.0),
                        make_spatial_grid(spatial_layout(grids.x_max, grids.lambda_max, grids.points)),
                        make_spectral_grid(spectral_layout(grids.x_max, grids.lambda_max, grids.points)),
                        grids.threads);
    for (double d : ctx.density_at_nodes())
        if (!(d >= 0.0) || !std::isfinite(d))
            throw HypothesisError("calibrate: raw density must be non-negative on the spectral grid");

    double c0 = 0.0;
    for (std::size_t k = 0; k < test_functions.size(); ++k) {
        const auto f = ctx.sample(test_functions[k]);
        const double norm2 = std::pow(lp_norm(f, 2.0), 2);
        const double denom = std::pow(ctx.spectral_lp_norm(ctx.forward(f), 2.0), 2);
        if (!(denom >= 1e-12 * norm2)) throw NumericalError("calibrate: degenerate density");
        const double ck = norm2 / denom;
        if (k == 0) {
            c0 = ck;
        } else if (std::abs(ck - c0) > 1e-3 * c0) {
            throw NumericalError("calibrate: test function " + std::to_string(k) + " gives C0 = " +
                                 std::to_string(ck) + " against " + std::to_string(c0));
        }
    }
    return SpectralDensity(model, [raw = std::move(raw_density), c0](double l) { return c0 * raw(l); }, c0);
}

/// Jacobi density C0 |c(l)|^{-2} with C0 fixed by calibrate().
inline SpectralDensity density_jacobi(double alpha, double beta, const CalibrationGrids& grids = {}) {
    auto model = make_jacobi(alpha, beta);
    return calibrate(model, [alpha, beta](double l) { return jacobi_c_inverse_sq(alpha, beta, l); },
                     default_calibration_functions(), grids);
}

struct DensityExponentFit {
    double a_fit = 0.0;
    double alpha_fit = 0.0;
    double K_fit = 1.0;
    double residual = 0.0;  // combined SSE of the two log-log fits at K_fit
};

/// Two-regime power-law fit of log density against log l on [1e-3, 1e2]:
/// slopes 2a+1 below K and 2 alpha+1 above it, K chosen from 32 log-spaced
/// candidates in [1e-2, 10] to minimise the combined residual.
inline DensityExponentFit fit_density_exponents(const SpectralDensity& sd) {
    constexpr std::size_t n = 256;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        const double l = 1e-3 * std::pow(1e5, t);
        lx[i] = std::log(l);
        ly[i] = std::log(sd(l));
    }
    DensityExponentFit best;
    best.residual = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < 32; ++c) {
        const double K = 1e-2 * std::pow(1e3, static_cast<double>(c) / 31.0);
        const auto split = static_cast<std::size_t>(
            std::upper_bound(lx.begin(), lx.end(), std::log(K)) - lx.begin());
        if (split < 3 || n - split < 3) continue;
        const auto lo = fit_line(std::span(lx).first(split), std::span(ly).first(split));
        const auto hi = fit_line(std::span(lx).subspan(split), std::span(ly).subspan(split));
        const double r = lo.sse + hi.sse;
        if (r < best.residual * (1.0 - 1e-9)) {
            best = {(lo.slope - 1.0) / 2.0, (hi.slope - 1.0) / 2.0, K, r};
        }
    }
    return best;
}

struct DensityEnvelope {
    double c1_sq_small = 0.0, c2_sq_small = 0.0;  // bounds of density / l^{2a+1} on (0, K]
    double c1_sq_large = 0.0, c2_sq_large = 0.0;  // bounds of density / l^{2 alpha+1} on (K, l_max]
    /// C2 / C1 with C1, C2 common to both regimes
    double spread() const {
        const double lo = std::min(c1_sq_small, c1_sq_large);
        const double hi = std::max(c2_sq_small, c2_sq_large);
        return std::sqrt(hi / lo);
    }
};

inline DensityEnvelope density_envelope(const SpectralDensity& sd, double a, double alpha, double K,
                                        double lambda_max, double lambda_min = 1e-3) {
    DensityEnvelope e;
    e.c1_sq_small = e.c1_sq_large = std::numeric_limits<double>::infinity();
    constexpr std::size_t n = 400;
    for (std::size_t i = 0; i < n; ++i) {
        const double l =
            lambda_min * std::pow(lambda_max / lambda_min, static_cast<double>(i) / (n - 1));
        const double d = sd(l);
        if (l <= K) {
            const double r = d / std::pow(l, 2 * a + 1);
            e.c1_sq_small = std::min(e.c1_sq_small, r);
            e.c2_sq_small = std::max(e.c2_sq_small, r);
        } else {
            const double r = d / std::pow(l, 2 * alpha + 1);
            e.c1_sq_large = std::min(e.c1_sq_large, r);
            e.c2_sq_large = std::max(e.c2_sq_large, r);
        }
    }
    if (!std::isfinite(e.c1_sq_small)) e.c1_sq_small = e.c1_sq_large, e.c2_sq_small = e.c2_sq_large;
    if (!std::isfinite(e.c1_sq_large)) e.c1_sq_large = e.c1_sq_small, e.c2_sq_large = e.c2_sq_small;
    return e;
}

/// |‖f‖_2^2 - ‖f^‖_{L^2(pi)}^2| / ‖f‖_2^2
inline double plancherel_defect(const HarmonicContext& ctx, const WeightedSignal& f) {
    const double lhs = std::pow(lp_norm(f, 2.0), 2);
    const double rhs = std::pow(ctx.spectral_lp_norm(ctx.forward(f), 2.0), 2);
    return std::abs(lhs - rhs) / lhs;
}

/// |<f1,f2>_{A dx} - <f1^, f2^>_pi| / (‖f1‖_2 ‖f2‖_2)
inline double parseval_defect(const HarmonicContext& ctx, const WeightedSignal& f1, const WeightedSignal& f2) {
    const auto& d = *ctx.spatial();
    double lhs = 0.0;
    for (std::size_t i = 0; i < f1.size(); ++i)
        lhs += d.grid.weights[i] * d.weight[i] * f1.values[i] * f2.values[i];
    const auto F1 = ctx.forward(f1), F2 = ctx.forward(f2);
    const auto& dens = ctx.density_at_nodes();
    double rhs = 0.0;
    for (std::size_t j = 0; j < F1.size(); ++j) rhs += ctx.spectral()->weights[j] * dens[j] * F1.values[j] * F2.values[j];
    return std::abs(lhs - rhs) / (lp_norm(f1, 2.0) * lp_norm(f2, 2.0));
}

} // namespace cth
