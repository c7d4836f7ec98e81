#pragma once

#include <stdexcept>
#include <string>

namespace biphoton {

/// Invalid configuration: bad grid, empty range, mismatched lengths, ...
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Input data that makes an estimator undefined (zero norm, zero denominator).
class DegenerateInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace biphoton
