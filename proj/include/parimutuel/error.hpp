#pragma once

#include <stdexcept>
#include <string>

namespace parimutuel {

/// Bad input: out-of-range parameters, malformed files, invariant violations.
/// The CLI maps these to exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// log of a nonpositive value in the fitting path.
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Rank-deficient least-squares design.
class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration field failed validation. `field()` names the offender.
class ConfigError : public ValidationError {
public:
    ConfigError(std::string field, const std::string& what)
        : ValidationError(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace parimutuel
