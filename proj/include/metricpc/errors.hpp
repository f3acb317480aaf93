#pragma once

#include <stdexcept>
#include <string>

namespace metricpc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed literal, invalid plan or config, violated precondition.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A dyadic alpha does not carry enough bits for the integers it is applied to.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// The requested computation exceeds a configured size budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace metricpc
