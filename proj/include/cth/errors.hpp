#pragma once

#include <stdexcept>
#include <string>

namespace cth {

/// A standing hypothesis of the theory (parameter range, positivity of a
/// weight, monotonicity of a spectral function, ...) does not hold.
class HypothesisError : public std::invalid_argument {
public:
    explicit HypothesisError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure could not meet its tolerance or diverged.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cth
