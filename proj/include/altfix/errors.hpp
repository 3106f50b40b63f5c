#pragma once

#include <stdexcept>
#include <string>

namespace altfix {

/// Raised when an argument lies outside the domain of an operation
/// (unknown point, negative time, n = 0, infeasible constants, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised for structurally malformed input (non-square matrices, unsorted sample lists,
/// bad config documents).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace altfix
