#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ppc {

/// Raised when the requested working precision cannot be represented
/// (degree too large, bit count overflow, capped family index).
class PrecisionBudgetExceeded : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// The certified radius of a fractional part stayed above the requested
/// tolerance even after one precision doubling.
class IndeterminateFrac : public std::runtime_error {
 public:
  IndeterminateFrac(const std::string& what, std::uint64_t index = 0)
      : std::runtime_error(what), index_(index) {}

  /// 1-based sequence index that failed, 0 when not part of an orbit.
  std::uint64_t index() const noexcept { return index_; }

 private:
  std::uint64_t index_;
};

/// Point errors are too large to decide the pair-count threshold.
class TooBlurry : public std::domain_error {
 public:
  TooBlurry(const std::string& what, double max_error, double required)
      : std::domain_error(what), max_error_(max_error), required_(required) {}
  double max_error() const noexcept { return max_error_; }
  double required_bound() const noexcept { return required_; }

 private:
  double max_error_;
  double required_;
};

class LevelCapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class NonMonotone : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace ppc
