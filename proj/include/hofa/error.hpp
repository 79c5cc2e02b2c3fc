#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hofa {

/// Base class for every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad parameters, unsupported domains, violated preconditions.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A computation would exceed its operation-count budget.
class BudgetError : public Error {
public:
    BudgetError(const std::string& what, double attempted, double bound)
        : Error(what + ": attempted " + std::to_string(attempted) + " operations, budget " +
                std::to_string(bound)),
          attempted_(attempted), bound_(bound) {}

    double attempted() const noexcept { return attempted_; }
    double bound() const noexcept { return bound_; }

private:
    double attempted_;
    double bound_;
};

/// An internal consistency check failed. Indicates a bug, never bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

/// Not enough defined data to carry out an averaging step.
class InsufficientDataError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Random sumset did not cover enough of the group; retry with a larger set.
class CoverageError : public DomainError {
public:
    CoverageError(const std::string& what, double coverage)
        : DomainError(what), coverage_(coverage) {}
    double coverage() const noexcept { return coverage_; }

private:
    double coverage_;
};

}  // namespace hofa
