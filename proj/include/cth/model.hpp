#pragma once

// Chébli-Trimèche weight families A(x) on the half line and the scalars
// (rho, alpha, a, K) every spectral formula downstream consumes.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "cth/errors.hpp"

namespace cth {

enum class Family { BesselKingman, Jacobi, Custom };

inline std::string to_string(Family f) {
    switch (f) {
        case Family::BesselKingman: return "bessel-kingman";
        case Family::Jacobi: return "jacobi";
        case Family::Custom: return "custom";
    }
    return "unknown";
}

using RealFn = std::function<double(double)>;

/// Immutable description of a Chébli-Trimèche hypergroup on [0, inf).
///
/// The weight A and its logarithmic derivative A'/A are stored as pure
/// callables. `origin_slope` is the coefficient b1 in
/// A'/A = (2 alpha + 1)/x + b1 x + O(x^3) near the origin; it only feeds the
/// fourth-order Frobenius coefficient of the characters.
class HypergroupModel {
public:
    struct Params {
        Family family = Family::Custom;
        double alpha = 0.0;
        double beta = 0.0;
        double rho = 0.0;
        double a_exponent = 0.0;
        double K_crossover = 1.0;
        std::string descriptor;
    };

    HypergroupModel(Params params, RealFn weight, RealFn log_deriv,
                    std::optional<RealFn> log_deriv_prime = std::nullopt,
                    std::optional<double> origin_slope = std::nullopt)
        : p_(std::move(params)),
          weight_(std::move(weight)),
          log_deriv_(std::move(log_deriv)),
          log_deriv_prime_(std::move(log_deriv_prime)) {
        if (origin_slope) {
            origin_slope_ = *origin_slope;
        } else {
            // b1 ~ (A'/A - (2a+1)/x)/x, read off at a point where the
            // subtraction has not yet lost all its digits
            const double x = 1e-2;
            origin_slope_ = (log_deriv_(x) - (2.0 * p_.alpha + 1.0) / x) / x;
        }
    }

    Family family() const { return p_.family; }
    double alpha() const { return p_.alpha; }
    double beta() const { return p_.beta; }
    double rho() const { return p_.rho; }
    double a_exponent() const { return p_.a_exponent; }
    double K_crossover() const { return p_.K_crossover; }
    const std::string& descriptor() const { return p_.descriptor; }
    const Params& params() const { return p_; }
    double origin_slope() const { return origin_slope_; }

    double weight(double x) const { return weight_(x); }
    double log_deriv(double x) const { return log_deriv_(x); }

    /// d/dx (A'/A): analytic for built-in families, central difference otherwise.
    double log_deriv_prime(double x) const {
        if (log_deriv_prime_) return (*log_deriv_prime_)(x);
        const double h = 1e-5 * std::max(1.0, x);
        return (log_deriv_(x + h) - log_deriv_(x - h)) / (2.0 * h);
    }

    /// Same model up to callables: compares family and all scalar constants.
    bool same_as(const HypergroupModel& o) const {
        return p_.family == o.p_.family && p_.alpha == o.p_.alpha && p_.beta == o.p_.beta &&
               p_.rho == o.p_.rho && p_.a_exponent == o.p_.a_exponent &&
               p_.K_crossover == o.p_.K_crossover && p_.descriptor == o.p_.descriptor;
    }

private:
    Params p_;
    RealFn weight_;
    RealFn log_deriv_;
    std::optional<RealFn> log_deriv_prime_;
    double origin_slope_ = 0.0;
};

/// A(x) = x^{2 alpha + 1}, the radial Laplacian of R^{2 alpha + 2}.
inline HypergroupModel make_bessel_kingman(double alpha) {
    if (!(alpha > -0.5))
        throw HypothesisError("bessel-kingman: alpha must exceed -1/2, got " + std::to_string(alpha));
    const double k = 2.0 * alpha + 1.0;
    HypergroupModel::Params p;
    p.family = Family::BesselKingman;
    p.alpha = alpha;
    p.beta = 0.0;
    p.rho = 0.0;
    p.a_exponent = alpha;
    p.K_crossover = 1.0;
    p.descriptor = "bessel-kingman(alpha=" + std::to_string(alpha) + ")";
    return HypergroupModel(
        p, [k](double x) { return std::pow(x, k); }, [k](double x) { return k / x; },
        RealFn([k](double x) { return -k / (x * x); }), 0.0);
}

/// A(x) = sinh(x)^{2 alpha + 1} cosh(x)^{2 beta + 1}, rho = alpha + beta + 1.
inline HypergroupModel make_jacobi(double alpha, double beta) {
    if (!(alpha >= beta && beta >= -0.5 && alpha != -0.5))
        throw HypothesisError("jacobi: need alpha >= beta >= -1/2 and alpha != -1/2, got alpha=" +
                              std::to_string(alpha) + " beta=" + std::to_string(beta));
    const double m = 2.0 * alpha + 1.0;
    const double n = 2.0 * beta + 1.0;
    HypergroupModel::Params p;
    p.family = Family::Jacobi;
    p.alpha = alpha;
    p.beta = beta;
    p.rho = alpha + beta + 1.0;
    p.a_exponent = 0.5;
    p.K_crossover = 1.0;
    p.descriptor = "jacobi(alpha=" + std::to_string(alpha) + ",beta=" + std::to_string(beta) + ")";
    return HypergroupModel(
        p,
        [m, n](double x) { return std::pow(std::sinh(x), m) * std::pow(std::cosh(x), n); },
        [m, n](double x) { return m / std::tanh(x) + n * std::tanh(x); },
        RealFn([m, n](double x) {
            const double s = std::sinh(x), c = std::cosh(x);
            return -m / (s * s) + n / (c * c);
        }),
        // coth x = 1/x + x/3 + ..., tanh x = x + ...
        m / 3.0 + n);
}

/// Caller-supplied weight. The Chébli-Trimèche axioms are the caller's
/// promise; validate_axioms() checks what can be checked on a grid.
inline HypergroupModel make_custom(RealFn weight, RealFn log_deriv, double alpha, double rho,
                                   double a_exponent, double K_crossover,
                                   std::string descriptor = "custom") {
    HypergroupModel::Params p;
    p.family = Family::Custom;
    p.alpha = alpha;
    p.rho = rho;
    p.a_exponent = a_exponent;
    p.K_crossover = K_crossover;
    p.descriptor = std::move(descriptor);
    return HypergroupModel(p, std::move(weight), std::move(log_deriv));
}

struct AxiomCheck {
    bool pass = true;
    double worst_x = std::numeric_limits<double>::quiet_NaN();
    double worst_value = 0.0;
};

/// Grid scan of the four Chébli-Trimèche properties:
///  (i)   A > 0 and A(0+) = 0,
///  (ii)  A increasing,
///  (iii) A'/A decreasing,
///  (iv)  A'/A - (2 alpha + 1)/x bounded near the origin.
struct AxiomReport {
    AxiomCheck vanishing_positive;
    AxiomCheck increasing;
    AxiomCheck log_deriv_decreasing;
    AxiomCheck origin_behaviour;
    double rho_hat = 0.0;

    bool all_pass() const {
        return vanishing_positive.pass && increasing.pass && log_deriv_decreasing.pass &&
               origin_behaviour.pass;
    }
};

inline AxiomReport validate_axioms(const HypergroupModel& model, std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("validate_axioms: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1])))
            throw std::invalid_argument("validate_axioms: grid must be positive and strictly increasing");
    }
    AxiomReport r;
    const double k = 2.0 * model.alpha() + 1.0;

    // (i) positivity on the grid, then decay towards 0 at least like half
    // the leading power x^{(2 alpha + 1)/2}
    for (double x : grid) {
        const double w = model.weight(x);
        if (!(w > 0.0) || !std::isfinite(w)) {
            if (r.vanishing_positive.pass || w < r.vanishing_positive.worst_value) {
                r.vanishing_positive = {false, x, w};
            }
        }
    }
    if (r.vanishing_positive.pass) {
        const double x0 = grid.front();
        const double eps = 1e-12 * x0;
        const double ratio = model.weight(eps) / model.weight(x0);
        const double allowed = std::pow(eps / x0, 0.5 * k);
        if (!(ratio <= allowed)) r.vanishing_positive = {false, eps, model.weight(eps)};
    }

    // (ii) and (iii): record the largest violation of monotonicity
    double worst_inc = 0.0, worst_dec = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double w0 = model.weight(grid[i - 1]), w1 = model.weight(grid[i]);
        const double drop = w0 - w1;
        if (!(w1 > w0) && drop >= worst_inc) {
            worst_inc = drop;
            r.increasing = {false, grid[i], drop};
        }
        const double l0 = model.log_deriv(grid[i - 1]), l1 = model.log_deriv(grid[i]);
        const double rise = l1 - l0;
        const double slack = 1e-12 * std::max(std::abs(l0), 1.0);
        if (rise > slack && rise > worst_dec) {
            worst_dec = rise;
            r.log_deriv_decreasing = {false, grid[i], rise};
        }
    }

    // (iv) x * |A'/A - (2 alpha+1)/x| must vanish with x; a wrong alpha leaves
    // a constant offset 2|delta alpha|
    double worst_origin = 0.0;
    auto probe_origin = [&](double x) {
        const double v = x * std::abs(model.log_deriv(x) - k / x);
        if (!std::isfinite(v) || v > worst_origin) {
            worst_origin = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
            r.origin_behaviour.worst_x = x;
            r.origin_behaviour.worst_value = worst_origin;
        }
    };
    for (double x : {1e-4, 1e-3, 1e-2}) probe_origin(x);
    for (double x : grid)
        if (x <= 1e-2) probe_origin(x);
    r.origin_behaviour.pass = worst_origin <= 1e-2;

    r.rho_hat = 0.5 * model.log_deriv(grid.back());
    return r;
}

/// rho estimated as half of A'/A at a single far point; A'/A decreases
/// monotonically towards 2 rho, so one evaluation is enough.
inline double estimate_rho(const HypergroupModel& model, double x = 80.0) {
    return 0.5 * model.log_deriv(x);
}

/// G(x) = (A'/A)^2/4 + (A'/A)'/2 - rho^2; Condition (P) asks for
/// G(x) = (a^2 - 1/4)/x^2 + integrable remainder.
inline double g_function(const HypergroupModel& model, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("g_function: x must be positive");
    const double l = model.log_deriv(x);
    return 0.25 * l * l + 0.5 * model.log_deriv_prime(x) - model.rho() * model.rho();
}

} // namespace cth
