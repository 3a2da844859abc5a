#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ppc/families.hpp"
#include "ppc/hypothesis.hpp"

namespace ppc {

/// Arc [c,d] with 0 <= c < d <= 1, or wrap [c,1) u [0,d] with 0 <= d < c < 1.
class CircleInterval {
 public:
  enum class Kind { Arc, Wrap };

  static CircleInterval arc(double c, double d);
  static CircleInterval wrap(double c, double d);
  /// Arc when c < d, wrap when d < c.
  static CircleInterval from_endpoints(double c, double d);

  Kind kind() const { return kind_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double length() const { return kind_ == Kind::Arc ? d_ - c_ : (1.0 - c_) + d_; }

 private:
  CircleInterval(Kind kind, double c, double d) : kind_(kind), c_(c), d_(d) {}
  Kind kind_;
  double c_;
  double d_;
};

/// Strictly increasing function on [a,b] with its derivative.
struct MonotoneFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::string label;
};

MonotoneFunction power_function(unsigned d);
/// f_{n2} - f_{n1} evaluated in binary64.
MonotoneFunction family_difference(const SequenceFamily& family, std::uint64_t n1, std::uint64_t n2);
/// f_n evaluated in binary64.
MonotoneFunction family_term(const SequenceFamily& family, std::uint64_t n);

/// Preimage {alpha : g(alpha) in band at level M}; `left` is c_{M,q,p}.
struct PreimageInterval {
  std::int64_t M = 0;
  double left = 0.0;
  double right = 0.0;
  double tolerance = 0.0;

  double length() const { return right - left; }
};

struct MeasureResult {
  double measure = 0.0;
  std::vector<PreimageInterval> intervals;
  double main_term = 0.0;  // L(I) (b - a)
  double residual = 0.0;   // measure - main_term
  double derivative_at_a = 0.0;
  double tolerance = 0.0;
  IntervalSpec interval;
};

inline constexpr std::uint64_t kLevelCap = 1'000'000;

/// L(alpha in [a,b] : {g(alpha)} in I) by inverting g on every integer
/// level. tol in (0, 1e-6].
MeasureResult level_set_measure(const MonotoneFunction& g, const IntervalSpec& interval,
                                const CircleInterval& target, double tol = 1e-9);

struct LemmaBounds {
  double lower_main = 0.0;  // L (b-a) / (1 + L)
  double upper_main = 0.0;  // L (b-a) / (1 - L), infinite when L >= 1
  bool upper_unbounded = false;
  double residual_scaled = 0.0;  // |residual| g'(a) / L
  /// Smallest K with lower - K L/g'(a) <= measure <= upper + K L/g'(a).
  double sandwich_constant = 0.0;
};

LemmaBounds lemma_bounds_check(const MeasureResult& result, const CircleInterval& target);

/// Intervals {alpha : g(alpha) in [M - h, M + h]} for each integer M whose
/// band meets [g(a), g(b)].
std::vector<PreimageInterval> preimage_intervals(const MonotoneFunction& g,
                                                 const IntervalSpec& interval, double halfwidth,
                                                 double tol = 1e-9);

}  // namespace ppc
