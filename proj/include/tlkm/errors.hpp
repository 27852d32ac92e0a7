#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace tlkm {

// Thrown when a linear-algebra stage breaks down (singular or
// numerically indefinite system, non-finite intermediates).
// Carries a condition-number estimate of the offending matrix
// when one is available, otherwise NaN.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what,
                           double condition_estimate = std::nan(""))
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

// File and parse failures surfaced by loaders/writers.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tlkm
