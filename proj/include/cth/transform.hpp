#pragma once

// Quadrature forward / inverse hypergroup Fourier transforms
//   f^(l) = int_0^inf f(x) phi_l(x) A(x) dx,
//   f(x)  = int_0^inf f^(l) phi_l(x) d pi(l),
// and the weighted L^p norms on both sides.

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cth/density.hpp"
#include "cth/eigenfn.hpp"
#include "cth/model.hpp"
#include "cth/parallel.hpp"
#include "cth/quadrature.hpp"

namespace cth {

/// A spatial grid together with A(x) sampled at its nodes.
struct SpatialDomain {
    SpatialGrid grid;
    std::vector<double> weight;
};
using SpatialDomainPtr = std::shared_ptr<const SpatialDomain>;

inline SpatialDomainPtr make_spatial_domain(const HypergroupModel& model, SpatialGrid grid) {
    auto d = std::make_shared<SpatialDomain>();
    d->weight.reserve(grid.size());
    for (double x : grid.nodes) d->weight.push_back(model.weight(x));
    d->grid = std::move(grid);
    return d;
}

using SpectralGridPtr = std::shared_ptr<const SpectralGrid>;

/// Samples of f on the nodes of a spatial domain.
struct WeightedSignal {
    SpatialDomainPtr domain;
    std::vector<double> values;
    std::vector<std::string> warnings;

    std::size_t size() const { return values.size(); }
    const std::vector<double>& nodes() const { return domain->grid.nodes; }
};

/// Samples of f^ on the nodes of a spectral grid.
struct Spectrum {
    SpectralGridPtr grid;
    std::vector<double> values;
    std::vector<std::string> warnings;

    std::size_t size() const { return values.size(); }
    const std::vector<double>& nodes() const { return grid->nodes; }
};

template <class Fn>
WeightedSignal sample(const SpatialDomainPtr& domain, Fn&& fn) {
    WeightedSignal s{domain, {}, {}};
    s.values.reserve(domain->grid.size());
    for (double x : domain->grid.nodes) s.values.push_back(fn(x));
    return s;
}

template <class Fn>
Spectrum sample(const SpectralGridPtr& grid, Fn&& fn) {
    Spectrum s{grid, {}, {}};
    s.values.reserve(grid->size());
    for (double l : grid->nodes) s.values.push_back(fn(l));
    return s;
}

namespace detail {

inline void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite sample");
}

inline double lp_sum(const std::vector<double>& values, const std::vector<double>& w,
                     const std::vector<double>& dens, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double a = std::abs(values[i]);
        if (a == 0.0) continue;
        s += w[i] * dens[i] * (p == 2.0 ? a * a : std::pow(a, p));
    }
    return std::pow(s, 1.0 / p);
}

inline std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline std::vector<std::string> spatial_decay_warning(const WeightedSignal& f) {
    const auto& d = *f.domain;
    double l1 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) l1 += d.grid.weights[i] * d.weight[i] * std::abs(f.values[i]);
    const double tail = std::abs(f.values.back()) * d.weight.back();
    if (tail > 1e-10 * l1)
        return {"forward: |f(X_max)| A(X_max) = " + short_num(tail) +
                " exceeds 1e-10 ||f||_1; truncation error not negligible"};
    return {};
}

inline std::vector<std::string> spectral_decay_warning(const Spectrum& F) {
    double peak = 0.0;
    for (double v : F.values) peak = std::max(peak, std::abs(v));
    const double tail = std::abs(F.values.back());
    if (tail > 1e-10 * peak)
        return {"inverse: |F(Lambda_max)| = " + short_num(tail) +
                " exceeds 1e-10 max|F|; spectral truncation not negligible"};
    return {};
}

} // namespace detail

/// Weighted norm (sum_i w_i |f_i|^p A(x_i))^{1/p}; p = inf gives max |f_i|.
inline double lp_norm(const WeightedSignal& f, double p) {
    return detail::lp_sum(f.values, f.domain->grid.weights, f.domain->weight, p);
}

/// Norm in L^p(d pi): (sum_j v_j |F_j|^p density(l_j))^{1/p}.
inline double spectral_lp_norm(const Spectrum& F, const SpectralDensity& sd, double p) {
    std::vector<double> dens;
    dens.reserve(F.size());
    for (double l : F.nodes()) dens.push_back(sd(l));
    return detail::lp_sum(F.values, F.grid->weights, dens, p);
}

/// Forward transform by direct character sweeps over the signal's nodes.
inline Spectrum forward(const HypergroupModel& model, const SpectralDensity& sd, const WeightedSignal& f,
                        const SpectralGridPtr& out, const EigenfunctionEvaluator& ev) {
    if (!ev.model().same_as(model) || !sd.model().same_as(model))
        throw std::invalid_argument("forward: evaluator/density built for a different model");
    detail::check_finite(f.values, "forward");
    const auto& d = *f.domain;
    std::vector<double> g(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) g[i] = d.grid.weights[i] * d.weight[i] * f.values[i];
    Spectrum F{out, std::vector<double>(out->size(), 0.0), detail::spatial_decay_warning(f)};
    for (std::size_t j = 0; j < out->size(); ++j) {
        const auto phi = ev.evaluate_grid(out->nodes[j], d.grid.nodes);
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) s += g[i] * phi[i];
        F.values[j] = s;
    }
    return F;
}

/// Inverse transform f(x_i) = sum_j v_j F_j phi_{l_j}(x_i) density(l_j).
inline WeightedSignal inverse(const HypergroupModel& model, const SpectralDensity& sd, const Spectrum& F,
                              const SpatialDomainPtr& out, const EigenfunctionEvaluator& ev) {
    if (!ev.model().same_as(model) || !sd.model().same_as(model))
        throw std::invalid_argument("inverse: evaluator/density built for a different model");
    detail::check_finite(F.values, "inverse");
    WeightedSignal f{out, std::vector<double>(out->grid.size(), 0.0), detail::spectral_decay_warning(F)};
    for (std::size_t j = 0; j < F.size(); ++j) {
        const double l = F.nodes()[j];
        const double c = F.grid->weights[j] * sd(l) * F.values[j];
        if (c == 0.0) continue;
        const auto phi = ev.evaluate_grid(l, out->grid.nodes);
        for (std::size_t i = 0; i < phi.size(); ++i) f.values[i] += c * phi[i];
    }
    return f;
}

/// Everything needed to move signals between one spatial and one spectral
/// grid: the model, its Plancherel density and the cached character table
/// phi_{l_j}(x_i). Immutable once built; share it freely between threads.
class HarmonicContext {
public:
    struct Options {
        double x_max = 12.0;
        double lambda_max = 40.0;
        std::size_t points = 16;
        unsigned threads = 1;
        double series_cutoff = 1e-3;
        OdeTolerances tolerances{};
    };

    HarmonicContext(SpectralDensity density, const SpatialGrid& spatial, const SpectralGrid& spectral,
                    unsigned threads = 1, double series_cutoff = 1e-3, OdeTolerances tol = {})
        : density_(std::move(density)),
          evaluator_(density_.model(), series_cutoff, tol),
          spatial_(make_spatial_domain(density_.model(), spatial)),
          spectral_(std::make_shared<const SpectralGrid>(spectral)) {
        dens_.reserve(spectral_->size());
        for (double l : spectral_->nodes) dens_.push_back(density_(l));
        const std::size_t nx = spatial_->grid.size();
        table_.assign(spectral_->size() * nx, 0.0);
        parallel_for(spectral_->size(), threads, [&](std::size_t j) {
            const auto row = evaluator_.evaluate_grid(spectral_->nodes[j], spatial_->grid.nodes);
            std::copy(row.begin(), row.end(), table_.begin() + static_cast<std::ptrdiff_t>(j * nx));
        });
    }

    static HarmonicContext build(SpectralDensity density, const Options& o) {
        return HarmonicContext(std::move(density),
                               make_spatial_grid(spatial_layout(o.x_max, o.lambda_max, o.points)),
                               make_spectral_grid(spectral_layout(o.x_max, o.lambda_max, o.points)),
                               o.threads, o.series_cutoff, o.tolerances);
    }

    const HypergroupModel& model() const { return density_.model(); }
    const SpectralDensity& density() const { return density_; }
    const EigenfunctionEvaluator& evaluator() const { return evaluator_; }
    const SpatialDomainPtr& spatial() const { return spatial_; }
    const SpectralGridPtr& spectral() const { return spectral_; }
    /// density(l_j) at the spectral nodes
    const std::vector<double>& density_at_nodes() const { return dens_; }
    double character(std::size_t j, std::size_t i) const { return table_[j * spatial_->grid.size() + i]; }

    template <class Fn>
    WeightedSignal sample(Fn&& fn) const { return cth::sample(spatial_, std::forward<Fn>(fn)); }
    template <class Fn>
    Spectrum sample_spectrum(Fn&& fn) const { return cth::sample(spectral_, std::forward<Fn>(fn)); }

    Spectrum forward(const WeightedSignal& f) const {
        require_domain(f);
        detail::check_finite(f.values, "forward");
        const auto& d = *spatial_;
        const std::size_t nx = d.grid.size();
        std::vector<double> g(nx);
        for (std::size_t i = 0; i < nx; ++i) g[i] = d.grid.weights[i] * d.weight[i] * f.values[i];
        Spectrum F{spectral_, std::vector<double>(spectral_->size(), 0.0), detail::spatial_decay_warning(f)};
        for (std::size_t j = 0; j < spectral_->size(); ++j) {
            const double* row = &table_[j * nx];
            double s = 0.0;
            for (std::size_t i = 0; i < nx; ++i) s += g[i] * row[i];
            F.values[j] = s;
        }
        return F;
    }

    WeightedSignal inverse(const Spectrum& F) const {
        if (F.grid != spectral_ && *F.grid != *spectral_)
            throw std::invalid_argument("inverse: spectrum lives on a different spectral grid");
        detail::check_finite(F.values, "inverse");
        const std::size_t nx = spatial_->grid.size();
        WeightedSignal f{spatial_, std::vector<double>(nx, 0.0), detail::spectral_decay_warning(F)};
        for (std::size_t j = 0; j < spectral_->size(); ++j) {
            const double c = spectral_->weights[j] * dens_[j] * F.values[j];
            if (c == 0.0) continue;
            const double* row = &table_[j * nx];
            for (std::size_t i = 0; i < nx; ++i) f.values[i] += c * row[i];
        }
        return f;
    }

    double spectral_lp_norm(const Spectrum& F, double p) const {
        return detail::lp_sum(F.values, spectral_->weights, dens_, p);
    }

private:
    void require_domain(const WeightedSignal& f) const {
        if (f.domain != spatial_ && (f.domain->grid != spatial_->grid))
            throw std::invalid_argument("forward: signal lives on a different spatial grid");
    }

    SpectralDensity density_;
    EigenfunctionEvaluator evaluator_;
    SpatialDomainPtr spatial_;
    SpectralGridPtr spectral_;
    std::vector<double> dens_;
    std::vector<double> table_;
};

} // namespace cth
