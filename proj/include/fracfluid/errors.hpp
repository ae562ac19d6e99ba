#pragma once

#include <stdexcept>
#include <string>

namespace fracfluid {

/// A parameter lies outside the domain on which a formula is defined.
class DomainError : public std::domain_error {
public:
    DomainError(std::string parameter, const std::string& what)
        : std::domain_error(parameter + ": " + what), parameter_(std::move(parameter)) {}

    const std::string& parameter() const noexcept { return parameter_; }

private:
    std::string parameter_;
};

/// Vector lengths or history prefixes that do not line up.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller asked for something the operation does not support.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure detected while running a scheme.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fracfluid
