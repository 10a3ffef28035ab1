#pragma once

#include <stdexcept>
#include <string>

namespace qzk {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A requested object would exceed the configured dimension cap.
struct DimensionLimitError : Error {
    explicit DimensionLimitError(const std::string& msg) : Error(msg) {}
};

// An input violates a documented numerical contract (non-Hermitian,
// non-unitary, non-normalized, ...).
struct ContractError : Error {
    explicit ContractError(const std::string& msg) : Error(msg) {}
};

// An argument fails a structural precondition (unknown register, degree
// mismatch, non-isomorphic instance, degenerate eigenvalue, ...).
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// The operation is not defined for this object (e.g. string commitments
// for a distribution-only scheme).
struct UnsupportedError : Error {
    explicit UnsupportedError(const std::string& msg) : Error(msg) {}
};

} // namespace qzk
