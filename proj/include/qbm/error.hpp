// error.hpp — exception types shared by every module

#pragma once

#include <stdexcept>
#include <string>

namespace qbm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid physical configuration or malformed input document.
struct ConfigError : Error {
    using Error::Error;
};

// Argument outside the domain of a formula (e.g. beta*omega <= 0).
struct DomainError : Error {
    using Error::Error;
};

// Evaluation requested exactly on a pole of the secular function.
struct PoleError : DomainError {
    using DomainError::DomainError;
};

// Iterative or adaptive method failed to meet its tolerance.
struct NumericalError : Error {
    using Error::Error;
};

// Problem size beyond what an algorithm is meant to handle.
struct CapabilityError : Error {
    using Error::Error;
};

// Oscillatory quadrature cannot resolve the requested time with its panel budget.
struct ResolutionError : NumericalError {
    ResolutionError(const std::string& what, double achievable_t_max)
        : NumericalError(what), t_max(achievable_t_max) {}
    double t_max;
};

} // namespace qbm
