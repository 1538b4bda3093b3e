#pragma once

#include <stdexcept>
#include <string>

namespace drank {

// Argument outside the mathematical domain of an operation (x <= 0, sigma <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Input data that cannot support the requested analysis: too few usable points,
// malformed files, zero variance, invalid indicator rows.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative method failed to converge.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace drank
