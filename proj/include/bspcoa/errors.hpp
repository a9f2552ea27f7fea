#pragma once

#include <stdexcept>
#include <string>

namespace bspcoa {

/// Bad invocation or invalid configuration (CLI exit code 1).
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or degenerate input data (CLI exit code 2).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed: factorization, empty spectrum, zero norm (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace bspcoa
