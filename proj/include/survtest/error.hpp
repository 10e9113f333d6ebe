#pragma once

#include <stdexcept>
#include <string>

namespace survtest {

/// Bad input: malformed CSV, invalid parameters, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The data are valid but the statistic cannot be computed on them
/// (singular covariance, failed non-negativity gate).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The operator estimate behind the Cramer-von Mises p-value has a
/// materially negative eigenvalue.
class GateError : public DegenerateError {
 public:
  using DegenerateError::DegenerateError;
};

}  // namespace survtest
