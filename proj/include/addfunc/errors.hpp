#pragma once

#include <stdexcept>
#include <string>

namespace addfunc {

/// Raised when an input violates the documented domain of an operation.
/// The message names the violated inequality, e.g. "requires 2*sqrt(d) <= s".
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation fails for numerical reasons (non-convergence,
/// NaN from a user functional, overflow, LP breakdown).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw PreconditionError("requires " + what);
}

}  // namespace addfunc
