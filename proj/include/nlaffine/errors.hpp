#pragma once

#include <stdexcept>
#include <string>

namespace nlaffine {

// Exit-code taxonomy shared by the library and the CLI.
enum class ErrorKind {
    Validation = 1,
    Config = 2,
    Regime = 3,
    Numerical = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

/// Model rejected by admissibility checks (no uniqueness regime applies).
class AdmissibilityError : public Error {
public:
    explicit AdmissibilityError(const std::string& what)
        : Error(ErrorKind::Validation, what) {}
};

/// A closed form was requested outside the regime where it is proven.
class RegimeError : public Error {
public:
    explicit RegimeError(const std::string& what) : Error(ErrorKind::Regime, what) {}
};

/// Closed-form precondition failure (wrong parameter family).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::Regime, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class BlowUpError : public NumericalError {
public:
    BlowUpError(double t, const std::string& what) : NumericalError(what), time_(t) {}

    /// First time at which the solution left the finite range.
    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

class CflViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PolicyDivergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class OutOfGrid : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace nlaffine
