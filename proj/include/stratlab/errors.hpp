#pragma once

#include <stdexcept>
#include <string>

namespace stratlab {

// Violated precondition or interface contract. CLI maps this to exit code 2.
class contract_error : public std::invalid_argument {
 public:
  explicit contract_error(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical breakdown: NaN/overflow, divergence, unmet tolerance. CLI exit code 4.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stratlab
