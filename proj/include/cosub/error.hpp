#pragma once

#include <stdexcept>
#include <string>

namespace cosub {

/// Raised for malformed inputs: bad files, inconsistent sizes, invalid partitions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot produce a trustworthy result.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cosub
