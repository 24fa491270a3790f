#pragma once

#include <stdexcept>
#include <string>

namespace levy {

/// Argument outside the mathematical domain of an operation (x = 0 for a
/// Lévy density, K = S0 for a slope, u outside the characteristic strip...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A computation produced a non-finite value or failed to converge.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive integration hit its subdivision limit. Carries the partial result.
class IntegrationFailure : public NumericFailure {
public:
    IntegrationFailure(const std::string& what, double partial, double error_estimate)
        : NumericFailure(what), partial_(partial), error_estimate_(error_estimate) {}

    double partial() const noexcept { return partial_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double partial_;
    double error_estimate_;
};

/// The requested engine does not support the model (e.g. CGMY path sampling).
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Call quote below intrinsic value.
class ArbitrageViolation : public DomainError {
public:
    using DomainError::DomainError;
};

/// Call quote at or above the spot, which no martingale model can produce.
class UpperBoundViolation : public DomainError {
public:
    using DomainError::DomainError;
};

/// Asymptotic formula requested where its hypothesis fails (zero slope).
class NotApplicable : public DomainError {
public:
    using DomainError::DomainError;
};

/// Malformed or inconsistent configuration. `key` names the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace levy
