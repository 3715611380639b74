#pragma once

#include <stdexcept>
#include <string>

namespace interweave {

// Parameter outside the mathematical domain of an operation.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical truncation did not reach the requested accuracy.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Repeated eigenvalues where distinct ones are required.
struct DegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The law or kernel does not provide the requested capability.
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A factorization produced a covariance that is not positive semidefinite.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace interweave
