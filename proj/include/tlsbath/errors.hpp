#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tlsbath {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failures of the numerical kernel or of a physical precondition that only
/// becomes visible numerically. The CLI maps these to exit code 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Kernel of a generator is not one-dimensional (no or several steady states).
class KernelDimension : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonFiniteValue : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Hermiticity of a rate matrix is violated beyond round-off.
class HermiticityViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Moment dynamics are linearly unstable, so no steady state exists.
class UnstableSystem : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Closed-form feature requested outside its regime of existence
/// (e.g. Mollow sidebands below the dressing threshold).
class BelowThreshold : public Error {
public:
    using Error::Error;
};

/// Exact-oracle Hilbert space larger than the configured cap.
class DimensionCap : public Error {
public:
    using Error::Error;
};

/// Invalid physical parameters passed to a library call.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Schema violation in a scenario configuration. `field()` is the dotted
/// path of the offending key, e.g. "tls.kappa1".
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace tlsbath
