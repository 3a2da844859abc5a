#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <mpfr.h>

namespace ppc {

/// Smallest tolerance accepted by operations that emit a UnitPoint.
/// Points are stored as binary64, whose rounding error is at most 2^-54
/// on [0,1); anything tighter than 2^-50 cannot be certified.
inline constexpr double kMinDelta = 0x1p-50;

/// Largest working precision (bits) the engine will allocate.
inline constexpr std::uint64_t kMaxWorkingPrecision = std::uint64_t{1} << 30;

/// A dyadic rational numerator * 2^exponent in canonical form
/// (odd numerator, or zero with exponent 0).
class ExactReal {
 public:
  ExactReal() = default;
  ExactReal(mpz_class numerator, std::int64_t exponent);

  /// Exact conversion of a finite double.
  static ExactReal from_double(double x);

  const mpz_class& numerator() const { return numerator_; }
  std::int64_t exponent() const { return exponent_; }

  int sign() const { return sgn(numerator_); }
  bool greater_than_one() const;

  /// Significant bits of the numerator.
  std::size_t numerator_bits() const;

  double to_double() const;
  /// Smallest double >= value.
  double to_double_up() const;
  /// Largest double <= value.
  double to_double_down() const;

  /// Exact product by a nonnegative integer.
  ExactReal scaled(std::uint64_t factor) const;
  /// Exact power.
  ExactReal pow(std::uint64_t e) const;

  /// Exact fractional part in [0,1).
  ExactReal frac() const;

  /// "numerator*2^exponent", lossless.
  std::string to_string() const;

  friend bool operator==(const ExactReal& x, const ExactReal& y) {
    return x.exponent_ == y.exponent_ && x.numerator_ == y.numerator_;
  }
  friend int cmp(const ExactReal& x, const ExactReal& y);

 private:
  void canonicalize();

  mpz_class numerator_{0};
  std::int64_t exponent_ = 0;
};

/// Nearest dyadic rational with `bits` fractional bits to the decimal
/// `text` (ties to even). Throws std::invalid_argument on malformed input
/// or a value <= 1.
ExactReal parse_alpha(std::string_view text, unsigned bits);

/// Owning wrapper around an mpfr_t.
class Float {
 public:
  explicit Float(mpfr_prec_t precision);
  Float(const Float& other);
  Float(Float&& other) noexcept;
  Float& operator=(const Float& other);
  Float& operator=(Float&& other) noexcept;
  ~Float();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

 private:
  mpfr_t value_;
  bool live_ = false;
};

/// Midpoint-radius ball. The true value lies in [mid - rad, mid + rad];
/// every operation rounds the radius outward.
class Ball {
 public:
  static constexpr mpfr_prec_t kRadiusPrecision = 30;

  explicit Ball(mpfr_prec_t precision);
  Ball(const ExactReal& x, mpfr_prec_t precision);
  Ball(long x, mpfr_prec_t precision);

  const Float& mid() const { return mid_; }
  const Float& rad() const { return rad_; }
  mpfr_prec_t precision() const { return mid_.precision(); }

  /// Midpoint rounded to nearest double.
  double mid_double() const;
  /// Radius rounded up to a double (inf when it does not fit).
  double rad_double() const;

  bool is_positive() const;  // mid - rad > 0
  /// True iff [other] lies inside [*this].
  bool contains(const Ball& other) const;

  friend Ball mul(const Ball& x, const Ball& y, mpfr_prec_t precision);
  friend Ball add(const Ball& x, const Ball& y, mpfr_prec_t precision);
  friend Ball sub(const Ball& x, const Ball& y, mpfr_prec_t precision);
  /// Requires y bounded away from zero (throws std::domain_error otherwise).
  friend Ball div(const Ball& x, const Ball& y, mpfr_prec_t precision);
  friend Ball scale(const Ball& x, std::uint64_t factor, mpfr_prec_t precision);

 private:
  void add_rounding_error(int ternary);

  Float mid_;
  Float rad_;
};

inline Ball operator*(const Ball& x, const Ball& y) {
  return mul(x, y, std::max(x.precision(), y.precision()));
}
inline Ball operator+(const Ball& x, const Ball& y) {
  return add(x, y, std::max(x.precision(), y.precision()));
}
inline Ball operator-(const Ball& x, const Ball& y) {
  return sub(x, y, std::max(x.precision(), y.precision()));
}
inline Ball operator/(const Ball& x, const Ball& y) {
  return div(x, y, std::max(x.precision(), y.precision()));
}

/// Binary exponentiation. `mults`, when given, is incremented by the
/// number of ball multiplications performed.
Ball pow(const Ball& base, std::uint64_t e, mpfr_prec_t precision,
         std::uint64_t* mults = nullptr);

/// A point of the circle [0,1) with a certified circle-metric error.
struct UnitPoint {
  double value = 0.0;
  double error = 0.0;

  friend bool operator==(const UnitPoint&, const UnitPoint&) = default;
};

/// Distance to the nearest integer of x - y.
double circle_distance(double x, double y);

/// Fractional part of a ball as a UnitPoint. The error covers the ball
/// radius plus the rounding to binary64.
UnitPoint frac_point(const Ball& x);

/// Exact fractional part of a dyadic as a UnitPoint.
UnitPoint frac_point(const ExactReal& x);

/// Working precision for alpha^d through `mults` chained ball products:
/// ceil(d log2 alpha_upper) + ceil(log2 1/delta) + ceil(log2(mults+1)) + 16.
std::uint64_t required_precision(std::uint64_t d, double alpha_upper,
                                 double delta, std::uint64_t mults);

/// Certified {alpha^d}. Doubles precision once before giving up with
/// IndeterminateFrac.
UnitPoint pow_frac(const ExactReal& alpha, std::uint64_t d, double delta);

/// Validates 0 < delta < 1/4 and delta >= kMinDelta.
void check_delta(double delta);

/// Throws PrecisionBudgetExceeded above kMaxWorkingPrecision.
mpfr_prec_t checked_precision(std::uint64_t bits);

}  // namespace ppc
