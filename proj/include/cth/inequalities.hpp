#pragma once

// Level-set functionals (M_psi, the Hörmander-type multiplier bound), the
// Paley / Hausdorff-Young / Hausdorff-Young-Paley sides, and seeded lower
// bounds for L^p -> L^q operator norms.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cth/errors.hpp"
#include "cth/parallel.hpp"
#include "cth/symbol.hpp"
#include "cth/transform.hpp"

namespace cth {

struct WeightFunctionPsi {
    RealFn psi;
    std::string descriptor;

    double operator()(double lambda) const { return psi(lambda); }
};

/// Both sides of an inequality whose implicit constant is unknown; `ratio`
/// is tracked across suites rather than compared with 1.
struct InequalityReport {
    std::string inequality;
    double lhs = 0.0;
    double rhs_core = 0.0;
    double ratio = 0.0;
    std::string inputs;
};

inline InequalityReport make_report(std::string name, double lhs, double rhs, std::string inputs) {
    InequalityReport r{std::move(name), lhs, rhs, rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0),
                       std::move(inputs)};
    return r;
}

/// sup_{t > 0} t * mu{v >= t}^exponent for a function v >= 0 known at nodes
/// carrying masses m_j (piecewise-constant discretisation). t -> t mu{v >= t}
/// is increasing between consecutive attained values of v and drops right
/// after each, so the sup is a max over attained values. exponent = 0 gives
/// sup v.
inline double level_set_sup(const std::vector<double>& v, const std::vector<double>& mass, double exponent) {
    if (v.size() != mass.size()) throw std::invalid_argument("level_set_sup: size mismatch");
    if (exponent == 0.0) {
        double m = 0.0;
        for (double x : v) m = std::max(m, x);
        return m;
    }
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // stable on ties so that the cumulative sums are reproducible
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    double best = 0.0, cum = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        cum += mass[order[k]];
        const double t = v[order[k]];
        if (t <= 0.0) break;
        // the level set {v >= t} includes every tie of t
        if (k + 1 < order.size() && v[order[k + 1]] == t) continue;
        best = std::max(best, t * std::pow(cum, exponent));
    }
    return best;
}

namespace detail {

inline std::vector<double> pi_masses(const SpectralDensity& sd, const SpectralGrid& grid) {
    std::vector<double> m(grid.size());
    double total = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        m[j] = grid.weights[j] * sd(grid.nodes[j]);
        total += m[j];
    }
    if (!(total > 0.0)) throw std::invalid_argument("level-set functional: density vanishes on the grid");
    return m;
}

} // namespace detail

/// M_psi = sup_t t * pi{psi >= t} on a spectral grid.
inline double m_psi(const SpectralDensity& sd, const WeightFunctionPsi& psi, const SpectralGrid& grid) {
    const auto mass = detail::pi_masses(sd, grid);
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        v[j] = psi(grid.nodes[j]);
        if (!(v[j] > 0.0) || !std::isfinite(v[j]))
            throw HypothesisError("m_psi: psi '" + psi.descriptor + "' must be positive and finite, got " +
                                  std::to_string(v[j]) + " at lambda=" + std::to_string(grid.nodes[j]));
    }
    return level_set_sup(v, mass, 1.0);
}

/// sup_s s * pi{|h| >= s}^{1/p - 1/q}; at p = q = 2 this is sup |h|.
inline double hormander_bound(const Symbol& h, const SpectralDensity& sd, const SpectralGrid& grid, double p,
                              double q) {
    if (!(p > 1.0 && p <= 2.0 && q >= 2.0 && std::isfinite(q)))
        throw std::invalid_argument("hormander_bound: need 1 < p <= 2 <= q < inf");
    const auto mass = detail::pi_masses(sd, grid);
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        v[j] = std::abs(h(grid.nodes[j]));
        if (!std::isfinite(v[j])) throw HypothesisError("hormander_bound: symbol not finite on the grid");
    }
    return level_set_sup(v, mass, 1.0 / p - 1.0 / q);
}

inline double conjugate_exponent(double p) { return p == 1.0 ? INFINITY : p / (p - 1.0); }

/// lhs = (int |f^|^b psi^{b(1/b - 1/p')} d pi)^{1/b}, rhs = M_psi^{1/b - 1/p'} ‖f‖_p,
/// with M_psi taken on the context's spectral grid.
inline InequalityReport hyp_report(const HarmonicContext& ctx, const WeightedSignal& f, const WeightFunctionPsi& psi,
                                   double p, double b) {
    if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("hyp_report: need 1 < p <= 2");
    const double pp = conjugate_exponent(p);
    if (!(b >= p && b <= pp)) throw std::invalid_argument("hyp_report: need p <= b <= p'");
    const double mpsi = m_psi(ctx.density(), psi, *ctx.spectral());
    if (!std::isfinite(mpsi)) throw HypothesisError("hyp_report: M_psi is not finite");
    const double e = 1.0 / b - 1.0 / pp;
    const auto F = ctx.forward(f);
    const auto& grid = *ctx.spectral();
    const auto& dens = ctx.density_at_nodes();
    double s = 0.0;
    for (std::size_t j = 0; j < F.size(); ++j) {
        const double a = std::abs(F.values[j]);
        if (a == 0.0) continue;
        const double w = e == 0.0 ? 1.0 : std::pow(psi(grid.nodes[j]), e);
        s += grid.weights[j] * dens[j] * std::pow(a * w, b);
    }
    const double lhs = std::pow(s, 1.0 / b);
    const double rhs = std::pow(mpsi, e) * lp_norm(f, p);
    return make_report("hyp", lhs, rhs,
                       "psi=" + psi.descriptor + " p=" + std::to_string(p) + " b=" + std::to_string(b));
}

/// Paley: lhs = (int |f^|^p psi^{2-p} d pi)^{1/p}, rhs = M_psi^{(2-p)/p} ‖f‖_p.
/// Identical arithmetic to hyp_report at b = p.
inline InequalityReport paley_report(const HarmonicContext& ctx, const WeightedSignal& f, const WeightFunctionPsi& psi,
                                     double p) {
    auto r = hyp_report(ctx, f, psi, p, p);
    r.inequality = "paley";
    r.inputs = "psi=" + psi.descriptor + " p=" + std::to_string(p);
    return r;
}

/// Hausdorff-Young: lhs = ‖f^‖_{L^{p'}(pi)}, rhs = ‖f‖_p.
inline InequalityReport hy_report(const HarmonicContext& ctx, const WeightedSignal& f, double p) {
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("hy_report: need 1 <= p <= 2");
    const double lhs = ctx.spectral_lp_norm(ctx.forward(f), conjugate_exponent(p));
    return make_report("hy", lhs, lp_norm(f, p), "p=" + std::to_string(p));
}

/// Uniform double in [0, 1) from a 64-bit engine, independent of the
/// standard library's distribution implementation.
inline double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

struct Probe {
    std::string descriptor;
    WeightedSignal signal;
};

/// Probe signals for operator-norm lower bounds: dilated Gaussians
/// e^{-(x/s)^2}, shifted bumps, and seeded random band-limited signals
/// (Gaussian windows times random cosine sums). Probes that are not decayed
/// at X_max in the A-weighted sense are dropped.
inline std::vector<Probe> probe_family(const HarmonicContext& ctx, std::uint64_t seed, std::size_t random_count = 16) {
    const double X = ctx.spatial()->grid.upper;
    const double L = ctx.spectral()->upper;
    std::vector<Probe> out;
    auto push = [&](std::string name, auto fn) {
        auto s = ctx.sample(fn);
        if (!detail::spatial_decay_warning(s).empty()) return;
        if (lp_norm(s, 2.0) == 0.0) return;
        out.push_back({std::move(name), std::move(s)});
    };
    // dilations: smallest scale still resolved by the spectral cutoff
    const double s_min = 8.0 / L, s_max = X / 4.0;
    constexpr int n_dil = 20;
    for (int k = 0; k < n_dil; ++k) {
        const double s = s_min * std::pow(s_max / s_min, static_cast<double>(k) / (n_dil - 1));
        push("dilation(s=" + std::to_string(s) + ")", [s](double x) { return std::exp(-(x / s) * (x / s)); });
    }
    for (double w : {0.5, 1.0}) {
        for (double c : {1.0, 2.0, 3.0, 4.0, 6.0}) {
            if (c + 6.0 * w > X) continue;
            push("bump(c=" + std::to_string(c) + ",w=" + std::to_string(w) + ")",
                 [c, w](double x) { return std::exp(-((x - c) / w) * ((x - c) / w)); });
        }
    }
    std::mt19937_64 gen(seed);
    for (std::size_t r = 0; r < random_count; ++r) {
        const double sigma = 0.5 + unit_uniform(gen) * (X / 8.0 - 0.5);
        std::array<double, 4> amp{}, freq{};
        for (int k = 0; k < 4; ++k) {
            amp[k] = 2.0 * unit_uniform(gen) - 1.0;
            freq[k] = unit_uniform(gen) * L / 4.0;
        }
        push("random(seed=" + std::to_string(seed) + ",#" + std::to_string(r) + ")", [=](double x) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += amp[k] * std::cos(freq[k] * x);
            return std::exp(-0.5 * x * x / (sigma * sigma)) * s;
        });
    }
    return out;
}

struct OpNormEstimate {
    double value = 0.0;
    std::string argmax;
    std::size_t probes_used = 0;
};

/// max over probes of ‖T_h f‖_q / ‖f‖_p, a lower bound on ‖T_h‖_{p->q}.
inline OpNormEstimate empirical_opnorm(const HarmonicContext& ctx, const Symbol& h, double p, double q,
                                       const std::vector<Probe>& probes, unsigned threads = 1) {
    std::vector<double> ratios(probes.size(), -1.0);
    parallel_for(probes.size(), threads, [&](std::size_t k) {
        const double np = lp_norm(probes[k].signal, p);
        if (!(np > 0.0)) return;
        ratios[k] = lp_norm(apply_multiplier(ctx, h, probes[k].signal), q) / np;
    });
    OpNormEstimate e;
    for (std::size_t k = 0; k < probes.size(); ++k) {
        if (ratios[k] < 0.0) continue;
        ++e.probes_used;
        if (ratios[k] > e.value || e.argmax.empty()) {
            if (ratios[k] >= e.value) {
                e.value = ratios[k];
                e.argmax = probes[k].descriptor;
            }
        }
    }
    return e;
}

inline OpNormEstimate empirical_opnorm(const HarmonicContext& ctx, const Symbol& h, double p, double q,
                                       std::uint64_t seed, unsigned threads = 1) {
    return empirical_opnorm(ctx, h, p, q, probe_family(ctx, seed), threads);
}

} // namespace cth
