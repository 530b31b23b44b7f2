#pragma once

#include <stdexcept>
#include <string>

namespace ssf {

inline constexpr const char* kToolVersion = "0.1.0";

/// Invalid input or violated precondition. CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure (no convergence, no root, divergent integral).
/// CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Round half-up to `decimals` places: 19.55 -> 19.6, 19.549 -> 19.5.
/// Ties round away from zero (for the non-negative values used here this
/// is the Official Gazette half-up convention).
double round_half_up(double value, int decimals);

}  // namespace ssf
