#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "cth/cth.hpp"

namespace testing_support {

// Contexts are expensive (a full character table); build each once per binary.
inline const cth::HarmonicContext& bessel_context(double alpha, double x_max = 12.0, double lambda_max = 40.0) {
    static std::map<std::tuple<double, double, double>, std::unique_ptr<cth::HarmonicContext>> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    auto& slot = cache[{alpha, x_max, lambda_max}];
    if (!slot) {
        cth::HarmonicContext::Options o;
        o.x_max = x_max;
        o.lambda_max = lambda_max;
        slot = std::make_unique<cth::HarmonicContext>(
            cth::HarmonicContext::build(cth::density_bessel_kingman(alpha), o));
    }
    return *slot;
}

inline const cth::HarmonicContext& jacobi_context(double alpha, double beta, double x_max = 12.0,
                                                  double lambda_max = 40.0) {
    static std::map<std::tuple<double, double, double, double>, std::unique_ptr<cth::HarmonicContext>> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    auto& slot = cache[{alpha, beta, x_max, lambda_max}];
    if (!slot) {
        cth::HarmonicContext::Options o;
        o.x_max = x_max;
        o.lambda_max = lambda_max;
        slot = std::make_unique<cth::HarmonicContext>(
            cth::HarmonicContext::build(cth::density_jacobi_closed_form(alpha, beta), o));
    }
    return *slot;
}

inline double rel_l2(const cth::WeightedSignal& a, const cth::WeightedSignal& b) {
    auto d = a;
    for (std::size_t i = 0; i < d.size(); ++i) d.values[i] -= b.values[i];
    return cth::lp_norm(d, 2.0) / cth::lp_norm(b, 2.0);
}

} // namespace testing_support
