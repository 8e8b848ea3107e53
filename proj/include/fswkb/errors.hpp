#pragma once

#include <stdexcept>
#include <string>

namespace fswkb {

/// Violated precondition or invalid user-supplied parameter (CLI exit code 2).
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure during a run: NaN, divergence, non-convergent quadrature
/// (CLI exit code 3).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fswkb
