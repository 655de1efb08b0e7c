#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace cth::special {

/// log|Gamma(z)| for Re z > 0 (Lanczos, g = 7, n = 9; ~1e-15 relative).
inline double log_abs_gamma(std::complex<double> z) {
    static constexpr std::array<double, 9> coef = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double g = 7.0;
    z -= 1.0;
    std::complex<double> sum = coef[0];
    for (int i = 1; i < 9; ++i) sum += coef[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + g + 0.5;
    const std::complex<double> lg =
        0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
    return lg.real();
}

/// log|Gamma(i y)|, from |Gamma(iy)|^2 = pi / (y sinh(pi y)).
inline double log_abs_gamma_imag(double y) {
    const double py = std::numbers::pi * std::abs(y);
    // log sinh(py) without overflow
    const double log_sinh = py > 20.0 ? py - std::log(2.0) + std::log1p(-std::exp(-2.0 * py))
                                      : std::log(std::sinh(py));
    return 0.5 * (std::log(std::numbers::pi) - std::log(std::abs(y)) - log_sinh);
}

} // namespace cth::special
