#pragma once

// Plancherel densities lambda -> C0 |c(lambda)|^{-2}.

#include <cmath>
#include <numbers>
#include <utility>

#include "cth/model.hpp"
#include "cth/special.hpp"

namespace cth {

/// The Plancherel measure d pi = density(lambda) d lambda of a model, with
/// every constant already absorbed into `density`.
class SpectralDensity {
public:
    SpectralDensity(HypergroupModel model, RealFn density, double c0)
        : model_(std::move(model)), density_(std::move(density)), c0_(c0) {}

    const HypergroupModel& model() const { return model_; }
    double operator()(double lambda) const { return density_(lambda); }
    double density(double lambda) const { return density_(lambda); }
    /// Multiplicative constant fixed by the Plancherel identity.
    double C0() const { return c0_; }
    const RealFn& function() const { return density_; }

private:
    HypergroupModel model_;
    RealFn density_;
    double c0_;
};

/// lambda^{2 alpha + 1} / (2^{2 alpha} Gamma(alpha + 1)^2).
inline SpectralDensity density_bessel_kingman(double alpha) {
    auto model = make_bessel_kingman(alpha);
    const double k = 2.0 * alpha + 1.0;
    const double c0 = std::exp(-2.0 * alpha * std::log(2.0) - 2.0 * std::lgamma(alpha + 1.0));
    return SpectralDensity(
        std::move(model), [k, c0](double l) { return l > 0.0 ? c0 * std::pow(l, k) : 0.0; }, c0);
}

/// |c(lambda)|^{-2} for the Jacobi c-function
///   c(l) = 2^{rho - il} Gamma(alpha+1) Gamma(il) / (Gamma((il+rho)/2) Gamma((il+alpha-beta+1)/2)),
/// evaluated through log|Gamma| so that large lambda does not overflow.
inline double jacobi_c_inverse_sq(double alpha, double beta, double lambda) {
    if (lambda == 0.0) return 0.0;
    const double rho = alpha + beta + 1.0;
    const double l = std::abs(lambda);
    using C = std::complex<double>;
    const double log_abs_c = rho * std::log(2.0) + std::lgamma(alpha + 1.0) +
                             special::log_abs_gamma_imag(l) -
                             special::log_abs_gamma(C(0.5 * rho, 0.5 * l)) -
                             special::log_abs_gamma(C(0.5 * (alpha - beta + 1.0), 0.5 * l));
    return std::exp(-2.0 * log_abs_c);
}

/// Jacobi density with the closed-form constant 2^{2 rho} / (2 pi) that the
/// weight sinh^{2a+1} cosh^{2b+1} (no factors of 2) implies. plancherel.hpp
/// re-derives C0 numerically through calibrate().
inline SpectralDensity density_jacobi_closed_form(double alpha, double beta) {
    auto model = make_jacobi(alpha, beta);
    const double rho = model.rho();
    const double c0 = std::exp(2.0 * rho * std::log(2.0)) / (2.0 * std::numbers::pi);
    return SpectralDensity(
        std::move(model),
        [alpha, beta, c0](double l) { return c0 * jacobi_c_inverse_sq(alpha, beta, l); }, c0);
}

} // namespace cth
