#pragma once

// Reference computations for the tests. Nothing here calls into the library:
// closed forms, series and brute-force routines written independently.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

/// Normalised Bessel function j_alpha(z) = 2^alpha Gamma(alpha+1) J_alpha(z) / z^alpha
/// by its power series (fine for z <= ~30 in double precision with enough terms).
inline double normalized_bessel_series(double alpha, double z) {
    double term = 1.0, sum = 1.0;
    const double q = -0.25 * z * z;
    for (int k = 1; k < 400; ++k) {
        term *= q / (k * (alpha + k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) && k > z) break;
    }
    return sum;
}

inline double sinc_character(double lambda, double x) {
    const double z = lambda * x;
    return z == 0.0 ? 1.0 : std::sin(z) / z;
}

/// Jacobi function phi_l(x) = 2F1((rho + i l)/2, (rho - i l)/2; alpha + 1; -sinh^2 x),
/// summed directly; converges for sinh^2 x < 1.
inline double jacobi_hypergeometric(double alpha, double beta, double lambda, double x) {
    const double rho = alpha + beta + 1.0;
    const std::complex<double> a(rho / 2, lambda / 2), b(rho / 2, -lambda / 2);
    const double z = -std::sinh(x) * std::sinh(x);
    std::complex<double> term = 1.0, sum = 1.0;
    for (int n = 0; n < 5000; ++n) {
        term *= (a + double(n)) * (b + double(n)) / ((alpha + 1.0 + n) * (n + 1.0)) * z;
        sum += term;
        if (std::abs(term) < 1e-17) break;
    }
    return sum.real();
}

/// Fixed-step RK4 for u'' + L(x) u' + mu u = 0 from a short series start at x0.
/// Independent of the library's adaptive scheme and variable change.
inline std::vector<double> rk4_character(const std::function<double(double)>& log_deriv, double alpha, double mu,
                                         const std::vector<double>& xs,
                                         double x0 = 1e-3, double h = 2e-4) {
    // u = 1 + c2 x^2 + O(x^4) near 0; the quartic term is below 1e-12 at x0
    const double c2 = -mu / (4.0 * (alpha + 1.0));
    double x = x0, u = 1.0 + c2 * x0 * x0, v = 2.0 * c2 * x0;
    auto f = [&](double xx, double uu, double vv, double& du, double& dv) {
        du = vv;
        dv = -log_deriv(xx) * vv - mu * uu;
    };
    std::vector<double> out;
    for (double target : xs) {
        if (target <= x0) {
            out.push_back(1.0 + c2 * target * target);
            continue;
        }
        while (x < target - 1e-15) {
            const double step = std::min(h, target - x);
            double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
            f(x, u, v, k1u, k1v);
            f(x + step / 2, u + step / 2 * k1u, v + step / 2 * k1v, k2u, k2v);
            f(x + step / 2, u + step / 2 * k2u, v + step / 2 * k2v, k3u, k3v);
            f(x + step, u + step * k3u, v + step * k3v, k4u, k4v);
            u += step / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
            v += step / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
            x += step;
        }
        out.push_back(u);
    }
    return out;
}

/// Plancherel density of the Bessel-Kingman model, l^{2a+1} / (2^{2a} Gamma(a+1)^2).
inline double bessel_kingman_density(double alpha, double lambda) {
    return std::pow(lambda, 2 * alpha + 1) / (std::pow(2.0, 2 * alpha) * std::tgamma(alpha + 1) * std::tgamma(alpha + 1));
}

/// Transform of e^{-x^2/2} in the Bessel-Kingman model: 2^a Gamma(a+1) e^{-l^2/2}.
inline double gaussian_transform(double alpha, double lambda) {
    return std::pow(2.0, alpha) * std::tgamma(alpha + 1) * std::exp(-0.5 * lambda * lambda);
}

/// Radial heat flow in three dimensions from e^{-x^2/2}.
inline double radial_heat_3d(double t, double x) {
    const double s = 1.0 + 2.0 * t;
    return std::pow(s, -1.5) * std::exp(-x * x / (2.0 * s));
}

/// Golden-section maximisation of a unimodal function on [a, b].
inline double golden_max(const std::function<double(double)>& f, double a, double b, int iters = 200) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int i = 0; i < iters; ++i) {
        if (f(c) > f(d))
            b = d;
        else
            a = c;
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    return f(0.5 * (a + b));
}

/// Brute-force max of f on n uniform points of [a, b].
inline double dense_max(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    double m = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, f(a + (b - a) * static_cast<double>(i) / (n - 1)));
    return m;
}

} // namespace oracle
