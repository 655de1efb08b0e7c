#pragma once

// Picard iteration for u_t = |Bu|^p and u_tt = b(t)|Bu|^p with B a Fourier
// multiplier, on a uniform time grid with the left-endpoint rule.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cth/errors.hpp"
#include "cth/inequalities.hpp"
#include "cth/symbol.hpp"
#include "cth/transform.hpp"

namespace cth {

struct PicardRun {
    std::vector<double> times;           // t_0 = 0 < ... < t_M = T
    std::vector<WeightedSignal> u;       // final iterate at each time
    int iterations = 0;
    std::vector<double> residuals;       // sup_m ‖u^{k+1}(t_m) - u^k(t_m)‖_2
    double c = 1.0;
    double T_star = 0.0;
    double set_radius = 0.0;             // the L2 bound defining S_c / Q_c
    std::vector<bool> in_set;            // per time step
    bool converged = false;
    bool contraction = true;             // residuals strictly decrease once below 1
    bool beyond_T_star = false;
    std::vector<std::string> notes;

    bool all_in_set() const {
        for (bool b : in_set)
            if (!b) return false;
        return !in_set.empty();
    }
    const WeightedSignal& final_state() const { return u.back(); }
};

struct PicardOptions {
    std::size_t steps = 20;
    double tol = 1e-10;
    int max_iters = 50;
    double blowup_factor = 1e3;
};

/// Local existence time of the heat problem with the exponent p - 1 on the
/// data norm that the contraction estimate ‖u0‖^2 + T^2 c^{2p} ‖u0‖^{2p} <= c^2 ‖u0‖^2 gives.
inline double heat_t_star(double u0_norm, double c, double p_exp) {
    if (!(c >= 1.0)) throw std::invalid_argument("heat_t_star: need c >= 1");
    if (!(u0_norm >= 0.0)) throw std::invalid_argument("heat_t_star: negative norm");
    if (u0_norm == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(c * c - 1.0) / (std::pow(c, p_exp) * std::pow(u0_norm, p_exp - 1.0));
}

/// Variant with ‖u0‖ to the first power, sqrt(c^2-1) / (c^p ‖u0‖); only reported.
inline double heat_t_star_unit_power(double u0_norm, double c, double p_exp) {
    if (!(c >= 1.0)) throw std::invalid_argument("heat_t_star: need c >= 1");
    return std::sqrt(c * c - 1.0) / (std::pow(c, p_exp) * u0_norm);
}

inline double wave_t_star(double u0_norm, double u1_norm, double b_l2, double c, double p_exp) {
    if (!(c >= 1.0)) throw std::invalid_argument("wave_t_star: need c >= 1");
    if (!(b_l2 > 0.0)) throw std::invalid_argument("wave_t_star: need ||b|| > 0");
    auto term = [&](double n) {
        const double d = b_l2 * b_l2 * std::pow(c, p_exp) * std::pow(n, 2.0 * p_exp - 2.0);
        return d == 0.0 ? std::numeric_limits<double>::infinity() : std::cbrt((c - 1.0) / d);
    };
    return std::min(term(u0_norm), term(u1_norm));
}

/// ‖b‖_{L^2(0,T)} by the solver's left-endpoint rule on M steps.
inline double b_l2(const RealFn& b, double T, std::size_t steps) {
    const double dt = T / static_cast<double>(steps);
    double s = 0.0;
    for (std::size_t j = 0; j < steps; ++j) {
        const double v = b(static_cast<double>(j) * dt);
        s += dt * v * v;
    }
    return std::sqrt(s);
}

/// One heat Picard update from a given path of Bu values:
/// out(t_m) = u0 + sum_{j<m} dt |Bu(t_j)|^p.
inline std::vector<WeightedSignal> heat_update(const WeightedSignal& u0, const std::vector<WeightedSignal>& Bu,
                                               double dt, double p_exp) {
    std::vector<WeightedSignal> out;
    out.reserve(Bu.size() + 1);
    out.push_back(u0);
    out.back().warnings.clear();
    for (std::size_t m = 1; m <= Bu.size(); ++m) {
        WeightedSignal next = out.back();
        for (std::size_t i = 0; i < next.size(); ++i) next.values[i] += dt * std::pow(std::abs(Bu[m - 1].values[i]), p_exp);
        out.push_back(std::move(next));
    }
    return out;
}

namespace detail {

inline double l2_distance(const WeightedSignal& a, const WeightedSignal& b) {
    WeightedSignal d = a;
    for (std::size_t i = 0; i < d.size(); ++i) d.values[i] -= b.values[i];
    return lp_norm(d, 2.0);
}

inline void check_symbol_hypothesis(const HarmonicContext& ctx, const Symbol& B) {
    std::vector<double> v, mass;
    const auto& g = *ctx.spectral();
    for (std::size_t j = 0; j < g.size(); ++j) {
        v.push_back(std::abs(B(g.nodes[j])));
        mass.push_back(g.weights[j] * ctx.density_at_nodes()[j]);
        if (!std::isfinite(v.back())) throw HypothesisError("symbol '" + B.descriptor + "' not finite on the grid");
    }
    if (!std::isfinite(level_set_sup(v, mass, 1.0)))
        throw HypothesisError("symbol '" + B.descriptor + "': sup_s s pi{|h| >= s} is not finite");
}

/// Shared Picard loop. kernel(m, j) weights |Bu(t_j)|^p in u(t_m); base(m) is
/// the free part. Both are causal (only j < m contributes).
template <class Base, class Kernel>
void picard_loop(const HarmonicContext& ctx, const Symbol& B, double p_exp, const PicardOptions& o,
                 double blowup_ref, Base&& base, Kernel&& kernel, PicardRun& run) {
    const std::size_t M = o.steps;
    std::vector<WeightedSignal> cur;
    for (std::size_t m = 0; m <= M; ++m) cur.push_back(base(m));
    const double guard = o.blowup_factor * blowup_ref;
    bool below_one = false;
    for (int k = 1; k <= o.max_iters; ++k) {
        std::vector<std::vector<double>> N(M);
        for (std::size_t j = 0; j < M; ++j) {
            auto Bu = apply_multiplier(ctx, B, cur[j]);
            N[j].resize(Bu.size());
            for (std::size_t i = 0; i < Bu.size(); ++i) N[j][i] = std::pow(std::abs(Bu.values[i]), p_exp);
        }
        std::vector<WeightedSignal> next;
        next.reserve(M + 1);
        double res = 0.0;
        for (std::size_t m = 0; m <= M; ++m) {
            WeightedSignal w = base(m);
            for (std::size_t j = 0; j < m; ++j) {
                const double kmj = kernel(m, j);
                if (kmj == 0.0) continue;
                for (std::size_t i = 0; i < w.size(); ++i) w.values[i] += kmj * N[j][i];
            }
            detail::check_finite(w.values, "picard");
            const double n = lp_norm(w, 2.0);
            if (n > guard && guard > 0.0)
                throw NumericalError("picard: blow-up guard hit at t=" + std::to_string(run.times[m]) +
                                     " (‖u‖=" + std::to_string(n) + ")");
            res = std::max(res, l2_distance(w, cur[m]));
            next.push_back(std::move(w));
        }
        if (below_one && !run.residuals.empty() && !(res < run.residuals.back()) && res > 0.0)
            run.contraction = false;
        if (res < 1.0) below_one = true;
        run.residuals.push_back(res);
        run.iterations = k;
        cur = std::move(next);
        if (res < o.tol) {
            run.converged = true;
            break;
        }
    }
    run.u = std::move(cur);
    if (!run.converged) {
        std::string hist;
        for (double r : run.residuals) hist += " " + std::to_string(r);
        throw NumericalError("picard: no convergence after " + std::to_string(o.max_iters) +
                             " iterations; residuals:" + hist);
    }
}

inline std::vector<double> uniform_times(double T, std::size_t M) {
    if (!(T > 0.0) || M == 0) throw std::invalid_argument("picard: need T > 0 and at least one step");
    std::vector<double> t(M + 1);
    for (std::size_t m = 0; m <= M; ++m) t[m] = T * static_cast<double>(m) / static_cast<double>(M);
    return t;
}

} // namespace detail

/// u(t) = u0 + int_0^t |Bu|^p, monitored against S_c = {‖u‖_{L^inf L^2} <= c ‖u0‖}.
inline PicardRun solve_heat(const HarmonicContext& ctx, const Symbol& B, double p_exp, const WeightedSignal& u0,
                            double T, double c, const PicardOptions& o = {}) {
    if (!(p_exp > 1.0)) throw std::invalid_argument("solve_heat: need p > 1");
    if (!(c >= 1.0)) throw std::invalid_argument("solve_heat: need c >= 1");
    detail::check_symbol_hypothesis(ctx, B);
    PicardRun run;
    run.times = detail::uniform_times(T, o.steps);
    run.c = c;
    const double n0 = lp_norm(u0, 2.0);
    run.T_star = heat_t_star(n0, c, p_exp);
    run.set_radius = c * n0;
    if (n0 > 0.0)
        run.notes.push_back("T* with ‖u0‖^1 = " + std::to_string(heat_t_star_unit_power(n0, c, p_exp)));
    if (T > run.T_star) {
        run.beyond_T_star = true;
        run.notes.push_back("T exceeds T*; proceeding");
    }
    const double dt = T / static_cast<double>(o.steps);
    WeightedSignal base = u0;
    base.warnings.clear();
    detail::picard_loop(
        ctx, B, p_exp, o, n0, [&](std::size_t) { return base; }, [dt](std::size_t, std::size_t) { return dt; },
        run);
    for (const auto& s : run.u) run.in_set.push_back(lp_norm(s, 2.0) <= run.set_radius * (1.0 + 1e-12));
    return run;
}

/// u(t) = u0 + t u1 + int_0^t (t - tau) b(tau) |Bu|^p, monitored against
/// Q_c = {‖u‖^2 <= c (‖u0‖^2 + T^2 ‖u1‖^2)}. T* uses ‖b‖_{L^2(0, T_max)}.
inline PicardRun solve_wave(const HarmonicContext& ctx, const Symbol& B, double p_exp, const RealFn& b,
                            const WeightedSignal& u0, const WeightedSignal& u1, double T, double c,
                            const PicardOptions& o = {}, double T_max = 0.0) {
    if (!(p_exp > 1.0)) throw std::invalid_argument("solve_wave: need p > 1");
    if (!(c >= 1.0)) throw std::invalid_argument("solve_wave: need c >= 1");
    if (u0.domain != u1.domain && u0.domain->grid != u1.domain->grid)
        throw std::invalid_argument("solve_wave: u0 and u1 on different grids");
    detail::check_symbol_hypothesis(ctx, B);
    PicardRun run;
    run.times = detail::uniform_times(T, o.steps);
    run.c = c;
    const double horizon = T_max > 0.0 ? T_max : T;
    const double bn = b_l2(b, horizon, o.steps);
    if (!std::isfinite(bn)) throw HypothesisError("solve_wave: ‖b‖_{L^2(0,T)} is not finite");
    const double n0 = lp_norm(u0, 2.0), n1 = lp_norm(u1, 2.0);
    run.T_star = bn > 0.0 ? wave_t_star(n0, n1, bn, c, p_exp) : std::numeric_limits<double>::infinity();
    run.notes.push_back("‖b‖ evaluated on [0, " + std::to_string(horizon) + "]");
    if (T > std::min(run.T_star, horizon)) {
        run.beyond_T_star = true;
        run.notes.push_back("T exceeds min(T*, T_max); proceeding");
    }
    run.set_radius = std::sqrt(c * (n0 * n0 + T * T * n1 * n1));
    const double dt = T / static_cast<double>(o.steps);
    std::vector<double> bj(o.steps);
    for (std::size_t j = 0; j < o.steps; ++j) bj[j] = b(run.times[j]);
    auto base = [&](std::size_t m) {
        WeightedSignal w = u0;
        w.warnings.clear();
        for (std::size_t i = 0; i < w.size(); ++i) w.values[i] += run.times[m] * u1.values[i];
        return w;
    };
    detail::picard_loop(
        ctx, B, p_exp, o, std::max(run.set_radius, std::max(n0, n1)), base,
        [&](std::size_t m, std::size_t j) { return dt * (run.times[m] - run.times[j]) * bj[j]; }, run);
    for (const auto& s : run.u) {
        const double n = lp_norm(s, 2.0);
        run.in_set.push_back(n * n <= run.set_radius * run.set_radius * (1.0 + 1e-12));
    }
    return run;
}

struct WaveGlobalEntry {
    double T = 0.0;
    double bound = 0.0;     // c T^{gamma0} ‖u0‖^2
    double sup_norm_sq = 0.0;
    bool pass = false;
};

struct WaveGlobalReport {
    double gamma = 0.0, gamma0 = 0.0;
    bool hypothesis_ok = false;
    std::string diagnostic;
    int halvings = 0;
    double u0_scale = 1.0;
    bool pass = false;
    std::vector<WaveGlobalEntry> entries;
};

/// Global check with u1 = 0: for each T, ‖u‖^2_{L^inf L^2} <= c T^{gamma0} ‖u0‖^2
/// with gamma0 = (2 gamma - 3)/(2p); u0 is halved until every T passes.
inline WaveGlobalReport wave_global_check(const HarmonicContext& ctx, double gamma, const RealFn& b,
                                          const WeightedSignal& u0, const Symbol& B, double p_exp,
                                          const std::vector<double>& T_list, double c = 2.0,
                                          const PicardOptions& o = {}, int max_halvings = 10) {
    if (!(gamma > 1.5)) throw std::invalid_argument("wave_global_check: need gamma > 3/2");
    WaveGlobalReport rep;
    rep.gamma = gamma;
    rep.gamma0 = (2.0 * gamma - 3.0) / (2.0 * p_exp);
    rep.hypothesis_ok = true;
    for (double T : T_list) {
        const double bn = b_l2(b, T, o.steps);
        if (!(bn <= c * std::pow(T, -gamma))) {
            rep.hypothesis_ok = false;
            rep.diagnostic = "‖b‖_{L^2(0," + std::to_string(T) + ")} = " + std::to_string(bn) + " exceeds c T^-gamma = " +
                             std::to_string(c * std::pow(T, -gamma));
            return rep;
        }
    }
    WeightedSignal zero = u0;
    std::fill(zero.values.begin(), zero.values.end(), 0.0);
    for (int h = 0; h <= max_halvings; ++h) {
        rep.halvings = h;
        rep.u0_scale = std::ldexp(1.0, -h);
        WeightedSignal data = u0;
        for (double& v : data.values) v *= rep.u0_scale;
        const double n0sq = std::pow(lp_norm(data, 2.0), 2);
        rep.entries.clear();
        bool all = true;
        for (double T : T_list) {
            WaveGlobalEntry e;
            e.T = T;
            e.bound = c * std::pow(T, rep.gamma0) * n0sq;
            try {
                const auto run = solve_wave(ctx, B, p_exp, b, data, zero, T, c, o);
                for (const auto& s : run.u) e.sup_norm_sq = std::max(e.sup_norm_sq, std::pow(lp_norm(s, 2.0), 2));
                e.pass = e.sup_norm_sq <= e.bound * (1.0 + 1e-12);
            } catch (const NumericalError&) {
                e.pass = false;
                e.sup_norm_sq = std::numeric_limits<double>::infinity();
            }
            all = all && e.pass;
            rep.entries.push_back(e);
        }
        if (all) {
            rep.pass = true;
            return rep;
        }
    }
    rep.diagnostic = "bound still violated after " + std::to_string(max_halvings) + " halvings";
    return rep;
}

} // namespace cth
