#pragma once

#include <stdexcept>
#include <string>

namespace newton_flow {

// Violated precondition on input data (bad index, asymmetric matrix, r out
// of range, point off the model).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NotPsdError : public DomainError {
public:
    NotPsdError(const std::string& what, double min_eigenvalue)
        : DomainError(what), min_eigenvalue_(min_eigenvalue) {}
    [[nodiscard]] double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

class NotShrinkerError : public DomainError {
public:
    NotShrinkerError(const std::string& what, double residual)
        : DomainError(what), residual_(residual) {}
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Failure of a numerical procedure on otherwise valid input.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double time = 0.0)
        : std::runtime_error(what), time_(time) {}
    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

class CflError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Thrown when a closed-form evolution is queried at or past its extinction
// time, or when a discrete profile pinches (radius reaches zero).
class ExtinctError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace newton_flow
