#pragma once

#include <stdexcept>
#include <string>

namespace heis {

/// Mismatched sequence lengths or group orders.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation requested on the center line x = 0 (or at the origin) where
/// the formula in question is not defined.
class SingularPointError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature exhausted its subdivision budget.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Finite-difference stencil hit a non-finite value or an underflowing step.
class StencilError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters (measure family ranges, sampler settings, CLI values).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace heis
