#pragma once

#include <stdexcept>
#include <string>

namespace circledyn {

// Invalid map specification or parameters (CLI exit code 2).
class SpecError : public std::invalid_argument {
public:
    explicit SpecError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure: overflow, cap hit, non-convergent bracketing (exit code 3).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace circledyn
