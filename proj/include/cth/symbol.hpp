#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "cth/transform.hpp"

namespace cth {

/// Bounded function h(lambda) defining the Fourier multiplier T_h, i.e.
/// (T_h f)^ = h f^.
struct Symbol {
    RealFn h;
    std::string descriptor;

    double operator()(double lambda) const { return h(lambda); }
};

inline Symbol constant_symbol(double c) {
    return {[c](double) { return c; }, "const(" + std::to_string(c) + ")"};
}

/// T_h f = inverse(h * forward(f)).
inline WeightedSignal apply_multiplier(const HarmonicContext& ctx, const Symbol& h, const WeightedSignal& f) {
    auto F = ctx.forward(f);
    for (std::size_t j = 0; j < F.size(); ++j) {
        const double hj = h(F.nodes()[j]);
        if (!std::isfinite(hj))
            throw std::invalid_argument("apply_multiplier: symbol '" + h.descriptor + "' is not finite at lambda=" +
                                        std::to_string(F.nodes()[j]));
        F.values[j] *= hj;
    }
    auto out = ctx.inverse(F);
    out.warnings.insert(out.warnings.begin(), F.warnings.begin(), F.warnings.end());
    return out;
}

/// Samples of the symbol on a set of spectral nodes.
inline std::vector<double> sample_symbol(const Symbol& h, const std::vector<double>& nodes) {
    std::vector<double> out;
    out.reserve(nodes.size());
    for (double l : nodes) out.push_back(h(l));
    return out;
}

} // namespace cth
