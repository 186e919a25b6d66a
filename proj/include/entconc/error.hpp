#pragma once

#include <stdexcept>
#include <string>

namespace entconc {

// Rejected parameters (stability violation, out-of-range efficiency, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Solver non-convergence, non-finite intermediate values, runaway truncation.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace entconc
