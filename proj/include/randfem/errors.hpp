#pragma once

#include <stdexcept>
#include <string>

namespace randfem {

// Bad arguments, flags, or config keys. Maps to exit code 2 in the CLI.
class param_error : public std::invalid_argument {
public:
  explicit param_error(const std::string& what) : std::invalid_argument(what) {}
};

// Invalid input data: broken mesh files, coefficient fields below their
// declared lower bound, malformed CSV. Maps to exit code 3.
class data_error : public std::runtime_error {
public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failures at run time: non-finite values that survive the resample
// policy, indefinite quadratic forms, solver breakdown. Maps to exit code 3.
class numeric_error : public std::runtime_error {
public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace randfem
