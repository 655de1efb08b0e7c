#pragma once

// Spectral multipliers phi(L), the heat semigroup, the closed-form
// spectral-multiplier bound and the Sobolev-embedding scan.

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cth/errors.hpp"
#include "cth/inequalities.hpp"
#include "cth/symbol.hpp"
#include "cth/transform.hpp"

namespace cth {

/// phi(u) on [rho^2, inf) with the two hypotheses of the multiplier bound.
struct SpectralFunction {
    RealFn phi;
    std::string descriptor;
    bool decreasing = false;
    bool limit_zero = false;

    double operator()(double u) const { return phi(u); }
};

/// Sets the flags from numerical checks: monotone on 2000 geometric samples
/// of u - rho^2 in [1e-6, 1e6], and phi(rho^2 + 1e6) <= 1e-2 phi(rho^2).
inline SpectralFunction make_spectral_function(RealFn phi, std::string descriptor, double rho) {
    SpectralFunction s{std::move(phi), std::move(descriptor), true, false};
    const double r2 = rho * rho;
    double prev = s.phi(r2);
    if (!std::isfinite(prev)) throw HypothesisError("spectral function '" + s.descriptor + "' not finite at rho^2");
    for (int i = 0; i < 2000; ++i) {
        const double u = r2 + 1e-6 * std::pow(1e12, i / 1999.0);
        const double v = s.phi(u);
        if (!std::isfinite(v)) throw HypothesisError("spectral function '" + s.descriptor + "' not finite");
        if (v > prev * (1.0 + 1e-14) + 1e-300) s.decreasing = false;
        prev = v;
    }
    const double head = std::abs(s.phi(r2));
    s.limit_zero = std::abs(s.phi(r2 + 1e6)) <= 1e-2 * head || (head == 0.0 && s.phi(r2 + 1e6) == 0.0);
    return s;
}

inline SpectralFunction heat_function(double t, double rho) {
    return make_spectral_function([t](double u) { return std::exp(-t * u); }, "exp(-" + std::to_string(t) + "u)",
                                  rho);
}

inline SpectralFunction bessel_potential_function(double b, double rho) {
    return make_spectral_function([b](double u) { return std::pow(1.0 + u, -b); },
                                  "(1+u)^-" + std::to_string(b), rho);
}

/// h(lambda) = phi(lambda^2 + rho^2)
inline Symbol spectral_symbol(const SpectralFunction& phi, const HypergroupModel& model) {
    const double r2 = model.rho() * model.rho();
    return {[f = phi.phi, r2](double l) { return f(l * l + r2); }, "phi(l^2+rho^2)," + phi.descriptor};
}

inline Symbol heat_symbol(double t, const HypergroupModel& model) {
    const double r2 = model.rho() * model.rho();
    return {[t, r2](double l) { return std::exp(-t * (l * l + r2)); }, "heat(t=" + std::to_string(t) + ")"};
}

/// e^{-tL} f
inline WeightedSignal heat_apply(const HarmonicContext& ctx, double t, const WeightedSignal& f) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("heat_apply: t must be positive");
    return apply_multiplier(ctx, heat_symbol(t, ctx.model()), f);
}

namespace detail {

/// The bracketed volume factor of the bound as a function of s = sqrt(u - rho^2).
inline double volume_factor(double s, double a, double alpha, double K, double e) {
    if (e == 0.0) return 1.0;
    if (s <= K) return std::pow(s, 2.0 * (a + 1.0) * e);
    return std::pow(std::pow(K, 2 * a + 2) - std::pow(K, 2 * alpha + 2) + std::pow(s, 2 * alpha + 2), e);
}

} // namespace detail

struct SpectralBound {
    double value = 0.0;
    double s_argmax = 0.0;
    double sup_below_last_decade = 0.0;  // sup over s <= 1e2, for the finiteness scan
};

/// sup_{u > rho^2} phi(u) * volume(u) over u = rho^2 + s^2, s on 1e4 geometric
/// points in [1e-4, 1e3] (plus s = 0), refined once around the argmax.
inline SpectralBound spectral_bound_scan(const SpectralFunction& phi, const HypergroupModel& model, double p,
                                         double q) {
    if (!(p > 1.0 && p <= 2.0 && q >= 2.0 && std::isfinite(q)))
        throw std::invalid_argument("spectral_bound: need 1 < p <= 2 <= q < inf");
    if (!phi.decreasing || !phi.limit_zero)
        throw HypothesisError("spectral_bound: '" + phi.descriptor +
                              "' must be monotonically decreasing with limit zero");
    const double e = 1.0 / p - 1.0 / q;
    const double r2 = model.rho() * model.rho();
    const double a = model.a_exponent(), al = model.alpha(), K = model.K_crossover();
    auto g = [&](double s) { return phi(r2 + s * s) * detail::volume_factor(s, a, al, K, e); };

    SpectralBound out;
    out.value = g(0.0);
    constexpr int n = 10000;
    const double lo = 1e-4, hi = 1e3;
    auto node = [&](int i) { return lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)); };
    int best = -1;
    for (int i = 0; i < n; ++i) {
        const double s = node(i);
        const double v = g(s);
        if (v > out.value) {
            out.value = v;
            out.s_argmax = s;
            best = i;
        }
        if (s <= 1e2 * (1.0 + 1e-12)) out.sup_below_last_decade = std::max(out.sup_below_last_decade, out.value);
    }
    if (best >= 0) {
        const double a0 = node(std::max(best - 1, 0)), b0 = node(std::min(best + 1, n - 1));
        constexpr int m = 1000;
        for (int i = 0; i <= m; ++i) {
            const double s = a0 * std::pow(b0 / a0, static_cast<double>(i) / m);
            const double v = g(s);
            if (v > out.value) {
                out.value = v;
                out.s_argmax = s;
            }
        }
    }
    return out;
}

inline double spectral_bound(const SpectralFunction& phi, const HypergroupModel& model, double p, double q) {
    return spectral_bound_scan(phi, model, p, q).value;
}

struct SobolevVerdict {
    bool verdict = false;
    double threshold = 0.0;  // (alpha + 1)(1/p - 1/q)
    double margin = 0.0;     // b - threshold
    double growth = 0.0;     // relative increase of the sup over the last decade of the scan
    std::string reason;
};

/// Finiteness of the bound for phi(u) = (1+u)^{-b}: true iff the sup grows
/// by less than 1% over the last decade s in [1e2, 1e3].
inline SobolevVerdict sobolev_check(double b, const HypergroupModel& model, double p, double q) {
    if (!(p > 1.0 && p <= 2.0 && q >= 2.0 && std::isfinite(q)))
        throw std::invalid_argument("sobolev_check: need 1 < p <= 2 <= q < inf");
    SobolevVerdict v;
    v.threshold = (model.alpha() + 1.0) * (1.0 / p - 1.0 / q);
    v.margin = b - v.threshold;
    if (p == 2.0 && q == 2.0) {
        v.verdict = b >= 0.0;
        v.reason = v.verdict ? "exponent 1/p-1/q = 0: bound is sup phi" : "b < 0";
        return v;
    }
    try {
        const auto phi = bessel_potential_function(b, model.rho());
        const auto scan = spectral_bound_scan(phi, model, p, q);
        v.growth = scan.value / scan.sup_below_last_decade - 1.0;
        v.verdict = std::isfinite(scan.value) && v.growth < 1e-2;
        v.reason = v.verdict ? "bounded on the scan" : "sup still growing at the top of the scan";
    } catch (const HypothesisError& ex) {
        v.verdict = false;
        v.reason = ex.what();
    }
    return v;
}

/// Two-branch heat decay bound, constants dropped: t^{-2(alpha+1)e} for small t,
/// e^{-t rho^2 - (a+1)^2 e^2 / t} t^{-2(a+1)e} for large t.
struct HeatBranchBound {
    double value = 0.0;
    std::string branch;  // "small", "large", or "gap-small" / "gap-large" when bridged
};

inline HeatBranchBound heat_branch_bound(const HypergroupModel& model, double t, double p, double q) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_branch_bound: t must be positive");
    const double e = 1.0 / p - 1.0 / q;
    const double a = model.a_exponent(), al = model.alpha(), K = model.K_crossover(), rho = model.rho();
    const double t_small = (al + 1.0) * e / K;  // small branch: t < t_small
    const double t_large = (a + 1.0) * e / K;   // large branch: t >= t_large
    auto small = [&] { return std::pow(t, -2.0 * (al + 1.0) * e); };
    auto large = [&] {
        return std::exp(-t * rho * rho) * std::exp(-(a + 1.0) * (a + 1.0) * e * e / t) *
               std::pow(t, -2.0 * (a + 1.0) * e);
    };
    if (t < t_small) return {small(), "small"};
    if (t >= t_large) return {large(), "large"};
    // a > alpha leaves a window between the thresholds: extend the closer branch
    if (t - t_small <= t_large - t) return {small(), "gap-small"};
    return {large(), "gap-large"};
}

struct HeatCurvePoint {
    double t = 0.0;
    double empirical = 0.0;
    double bound = 0.0;
    std::string branch;
    double closed_form_sup = 0.0;  // spectral_bound(e^{-tu})
};

inline std::vector<HeatCurvePoint> heat_opnorm_curve(const HarmonicContext& ctx, double p, double q,
                                                     const std::vector<double>& ts, std::uint64_t seed,
                                                     unsigned threads = 1) {
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (!(ts[i] > 0.0) || (i > 0 && !(ts[i] > ts[i - 1])))
            throw std::invalid_argument("heat_opnorm_curve: times must be positive and increasing");
    const auto probes = probe_family(ctx, seed);
    std::vector<HeatCurvePoint> out;
    out.reserve(ts.size());
    for (double t : ts) {
        HeatCurvePoint pt;
        pt.t = t;
        pt.empirical = empirical_opnorm(ctx, heat_symbol(t, ctx.model()), p, q, probes, threads).value;
        const auto pb = heat_branch_bound(ctx.model(), t, p, q);
        pt.bound = pb.value;
        pt.branch = pb.branch;
        pt.closed_form_sup = spectral_bound(heat_function(t, ctx.model().rho()), ctx.model(), p, q);
        out.push_back(pt);
    }
    return out;
}

} // namespace cth
