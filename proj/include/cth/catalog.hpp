#pragma once

// Named signals, symbols, weight functions and time coefficients, written
// "name:arg:arg" on the command line and in configs.

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cth/inequalities.hpp"
#include "cth/model.hpp"
#include "cth/symbol.hpp"

namespace cth {

struct NamedSpec {
    std::string name;
    std::vector<double> args;
};

inline NamedSpec parse_named(const std::string& text) {
    NamedSpec s;
    std::stringstream ss(text);
    std::string tok;
    bool first = true;
    while (std::getline(ss, tok, ':')) {
        if (first) {
            s.name = tok;
            first = false;
            continue;
        }
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end != tok.c_str() + tok.size())
            throw std::invalid_argument("'" + text + "': argument '" + tok + "' is not a number");
        s.args.push_back(v);
    }
    if (s.name.empty()) throw std::invalid_argument("empty name in '" + text + "'");
    return s;
}

namespace detail {

inline double arg(const NamedSpec& s, std::size_t i, double fallback) {
    return i < s.args.size() ? s.args[i] : fallback;
}

inline void max_args(const NamedSpec& s, std::size_t n, const std::string& text) {
    if (s.args.size() > n) throw std::invalid_argument("'" + text + "': too many arguments");
}

} // namespace detail

/// gaussian:sigma:amp, xgauss (x^2 e^{-x^2}), bump:c:w, gauss2cos (e^{-2x^2} cos x),
/// poly-gauss ((1+x^2) e^{-x^2/2}), zero
inline RealFn named_signal(const std::string& text) {
    const auto s = parse_named(text);
    if (s.name == "gaussian") {
        detail::max_args(s, 2, text);
        const double sg = detail::arg(s, 0, 1.0), amp = detail::arg(s, 1, 1.0);
        if (!(sg > 0.0)) throw std::invalid_argument("'" + text + "': sigma must be positive");
        return [sg, amp](double x) { return amp * std::exp(-0.5 * x * x / (sg * sg)); };
    }
    if (s.name == "xgauss") {
        detail::max_args(s, 0, text);
        return [](double x) { return x * x * std::exp(-x * x); };
    }
    if (s.name == "bump") {
        detail::max_args(s, 2, text);
        const double c = detail::arg(s, 0, 2.0), w = detail::arg(s, 1, 0.5);
        if (!(w > 0.0)) throw std::invalid_argument("'" + text + "': width must be positive");
        return [c, w](double x) { return std::exp(-((x - c) / w) * ((x - c) / w)); };
    }
    if (s.name == "gauss2cos") {
        detail::max_args(s, 0, text);
        return [](double x) { return std::exp(-2.0 * x * x) * std::cos(x); };
    }
    if (s.name == "poly-gauss") {
        detail::max_args(s, 0, text);
        return [](double x) { return (1.0 + x * x) * std::exp(-0.5 * x * x); };
    }
    if (s.name == "zero") return [](double) { return 0.0; };
    throw std::invalid_argument("unknown signal '" + text + "'");
}

/// The five-function Gaussian suite used by the verification tasks.
inline std::vector<std::string> gaussian_suite() {
    return {"gaussian:1:1", "xgauss", "gaussian:0.7071067811865476:1", "poly-gauss", "gauss2cos"};
}

/// bessel:s ((1+l^2)^{-s}), heat:t (e^{-t(l^2+rho^2)}), gauss:w (e^{-(l/w)^2}),
/// exp:w (e^{-l/w}), rational:s ((1+l)^{-s}), cutoff:L (1/(1+(l/L)^8)),
/// const:c, zero
inline Symbol named_symbol(const std::string& text, const HypergroupModel& model) {
    const auto s = parse_named(text);
    detail::max_args(s, 1, text);
    const double x = detail::arg(s, 0, 1.0);
    if (s.name == "bessel") return {[x](double l) { return std::pow(1.0 + l * l, -x); }, text};
    if (s.name == "heat") {
        if (!(x > 0.0)) throw std::invalid_argument("'" + text + "': t must be positive");
        const double r2 = model.rho() * model.rho();
        return {[x, r2](double l) { return std::exp(-x * (l * l + r2)); }, text};
    }
    if (s.name == "gauss") return {[x](double l) { return std::exp(-(l / x) * (l / x)); }, text};
    if (s.name == "exp") return {[x](double l) { return std::exp(-l / x); }, text};
    if (s.name == "rational") return {[x](double l) { return std::pow(1.0 + l, -x); }, text};
    if (s.name == "cutoff") return {[x](double l) { return 1.0 / (1.0 + std::pow(l / x, 8)); }, text};
    if (s.name == "const") return {[x](double) { return x; }, text};
    if (s.name == "zero") return {[](double) { return 0.0; }, text};
    throw std::invalid_argument("unknown symbol '" + text + "'");
}

/// Six symbols for the multiplier-bound suite; the first three are power laws.
inline std::vector<std::string> multiplier_suite() {
    return {"bessel:1", "bessel:1.5", "rational:2", "gauss:4", "exp:2", "cutoff:3"};
}

/// bessel:s ((1+l^2)^{-s}), const:c
inline WeightFunctionPsi named_psi(const std::string& text) {
    const auto s = parse_named(text);
    detail::max_args(s, 1, text);
    const double x = detail::arg(s, 0, 2.0);
    if (s.name == "bessel") return {[x](double l) { return std::pow(1.0 + l * l, -x); }, text};
    if (s.name == "const") return {[x](double) { return x; }, text};
    throw std::invalid_argument("unknown psi '" + text + "'");
}

/// const:v, exp:amp:rate (amp e^{-rate t})
inline RealFn named_coefficient(const std::string& text) {
    const auto s = parse_named(text);
    detail::max_args(s, 2, text);
    if (s.name == "const") {
        const double v = detail::arg(s, 0, 1.0);
        return [v](double) { return v; };
    }
    if (s.name == "exp") {
        const double a = detail::arg(s, 0, 1.0), r = detail::arg(s, 1, 1.0);
        return [a, r](double t) { return a * std::exp(-r * t); };
    }
    throw std::invalid_argument("unknown coefficient '" + text + "'");
}

} // namespace cth
