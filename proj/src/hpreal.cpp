#include "ppc/hpreal.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "ppc/errors.hpp"

namespace ppc {

// ---------------------------------------------------------------- ExactReal

ExactReal::ExactReal(mpz_class numerator, std::int64_t exponent)
    : numerator_(std::move(numerator)), exponent_(exponent) {
  canonicalize();
}

void ExactReal::canonicalize() {
  if (numerator_ == 0) {
    exponent_ = 0;
    return;
  }
  const auto tz = mpz_scan1(numerator_.get_mpz_t(), 0);
  if (tz > 0) {
    mpz_fdiv_q_2exp(numerator_.get_mpz_t(), numerator_.get_mpz_t(), tz);
    exponent_ += static_cast<std::int64_t>(tz);
  }
}

ExactReal ExactReal::from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite double");
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m * 2^e, 0.5 <= |m| < 1
  mpz_class num;
  mpz_set_d(num.get_mpz_t(), std::ldexp(m, 53));
  return ExactReal(std::move(num), static_cast<std::int64_t>(e) - 53);
}

std::size_t ExactReal::numerator_bits() const {
  if (numerator_ == 0) return 0;
  return mpz_sizeinbase(numerator_.get_mpz_t(), 2);
}

int cmp(const ExactReal& x, const ExactReal& y) {
  if (x.exponent_ == y.exponent_) return ::cmp(x.numerator_, y.numerator_);
  mpz_class lhs = x.numerator_;
  mpz_class rhs = y.numerator_;
  if (x.exponent_ > y.exponent_) {
    mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(),
                 static_cast<mp_bitcnt_t>(x.exponent_ - y.exponent_));
  } else {
    mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(),
                 static_cast<mp_bitcnt_t>(y.exponent_ - x.exponent_));
  }
  return ::cmp(lhs, rhs);
}

bool ExactReal::greater_than_one() const {
  return cmp(*this, ExactReal(1, 0)) > 0;
}

namespace {

double to_double_rounded(const ExactReal& x, mpfr_rnd_t rnd) {
  if (x.sign() == 0) return 0.0;
  Float tmp(static_cast<mpfr_prec_t>(std::max<std::size_t>(x.numerator_bits(), 2)));
  mpfr_set_z_2exp(tmp.get(), x.numerator().get_mpz_t(),
                  static_cast<mpfr_exp_t>(x.exponent()), MPFR_RNDN);
  return mpfr_get_d(tmp.get(), rnd);
}

}  // namespace

double ExactReal::to_double() const { return to_double_rounded(*this, MPFR_RNDN); }
double ExactReal::to_double_up() const { return to_double_rounded(*this, MPFR_RNDU); }
double ExactReal::to_double_down() const { return to_double_rounded(*this, MPFR_RNDD); }

ExactReal ExactReal::scaled(std::uint64_t factor) const {
  mpz_class f;
  mpz_import(f.get_mpz_t(), 1, 1, sizeof(factor), 0, 0, &factor);
  return ExactReal(numerator_ * f, exponent_);
}

ExactReal ExactReal::pow(std::uint64_t e) const {
  if (e == 0) return ExactReal(1, 0);
  if (exponent_ != 0 &&
      static_cast<std::uint64_t>(std::abs(exponent_)) >
          static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) / e) {
    throw PrecisionBudgetExceeded("exponent overflow in ExactReal::pow");
  }
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), numerator_.get_mpz_t(), static_cast<unsigned long>(e));
  return ExactReal(std::move(r), exponent_ * static_cast<std::int64_t>(e));
}

ExactReal ExactReal::frac() const {
  if (exponent_ >= 0) return ExactReal();
  mpz_class r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), numerator_.get_mpz_t(),
                  static_cast<mp_bitcnt_t>(-exponent_));
  return ExactReal(std::move(r), exponent_);
}

std::string ExactReal::to_string() const {
  return numerator_.get_str() + "*2^" + std::to_string(exponent_);
}

ExactReal parse_alpha(std::string_view text, unsigned bits) {
  if (bits < 8) throw std::invalid_argument("parse_alpha: bits must be >= 8");
  std::size_t i = 0;
  if (i < text.size() && text[i] == '+') ++i;
  std::string digits;
  std::size_t int_digits = 0;
  std::size_t frac_digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    digits.push_back(text[i++]);
    ++int_digits;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      digits.push_back(text[i++]);
      ++frac_digits;
    }
  }
  if (i != text.size() || int_digits == 0) {
    throw std::invalid_argument("malformed decimal: '" + std::string(text) + "'");
  }

  const mpz_class whole(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_digits);
  if (whole <= scale) {
    throw std::invalid_argument("alpha must exceed 1: '" + std::string(text) + "'");
  }

  // round(whole * 2^bits / 10^frac_digits), ties to even
  mpz_class num = whole;
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), bits);
  mpz_class q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), scale.get_mpz_t());
  const int c = ::cmp(mpz_class(2 * r), scale);
  if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) ++q;

  ExactReal alpha(std::move(q), -static_cast<std::int64_t>(bits));
  if (!alpha.greater_than_one()) {
    throw std::invalid_argument("alpha rounds to 1 at " + std::to_string(bits) + " bits");
  }
  return alpha;
}

// -------------------------------------------------------------------- Float

Float::Float(mpfr_prec_t precision) : live_(true) {
  mpfr_init2(value_, std::max<mpfr_prec_t>(precision, MPFR_PREC_MIN));
  mpfr_set_zero(value_, 1);
}

Float::Float(const Float& other) : live_(true) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Float::Float(Float&& other) noexcept : live_(other.live_) {
  value_[0] = other.value_[0];
  other.live_ = false;
}

Float& Float::operator=(const Float& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Float& Float::operator=(Float&& other) noexcept {
  if (this != &other) {
    if (live_) mpfr_clear(value_);
    value_[0] = other.value_[0];
    live_ = other.live_;
    other.live_ = false;
  }
  return *this;
}

Float::~Float() {
  if (live_) mpfr_clear(value_);
}

// --------------------------------------------------------------------- Ball

namespace {

constexpr mpfr_prec_t kRad = Ball::kRadiusPrecision;

// |x| rounded up to radius precision.
Float abs_up(const Float& x) {
  Float r(kRad);
  mpfr_abs(r.get(), x.get(), MPFR_RNDU);
  return r;
}

// acc += x * y, rounded up; all operands nonnegative.
void fma_up(Float& acc, const Float& x, const Float& y) {
  Float t(kRad);
  mpfr_mul(t.get(), x.get(), y.get(), MPFR_RNDU);
  mpfr_add(acc.get(), acc.get(), t.get(), MPFR_RNDU);
}

}  // namespace

Ball::Ball(mpfr_prec_t precision) : mid_(precision), rad_(kRad) {}

Ball::Ball(const ExactReal& x, mpfr_prec_t precision) : mid_(precision), rad_(kRad) {
  const int t = mpfr_set_z_2exp(mid_.get(), x.numerator().get_mpz_t(),
                                static_cast<mpfr_exp_t>(x.exponent()), MPFR_RNDN);
  add_rounding_error(t);
}

Ball::Ball(long x, mpfr_prec_t precision) : mid_(precision), rad_(kRad) {
  add_rounding_error(mpfr_set_si(mid_.get(), x, MPFR_RNDN));
}

void Ball::add_rounding_error(int ternary) {
  if (ternary == 0 || mpfr_zero_p(mid_.get())) return;
  // one ulp of the midpoint bounds a round-to-nearest error
  Float ulp(kRad);
  mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid_.get()) - mid_.precision(), MPFR_RNDU);
  mpfr_add(rad_.get(), rad_.get(), ulp.get(), MPFR_RNDU);
}

double Ball::mid_double() const { return mpfr_get_d(mid_.get(), MPFR_RNDN); }
double Ball::rad_double() const { return mpfr_get_d(rad_.get(), MPFR_RNDU); }

bool Ball::is_positive() const {
  Float lo(precision() + 8);
  mpfr_sub(lo.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return mpfr_sgn(lo.get()) > 0;
}

bool Ball::contains(const Ball& other) const {
  const mpfr_prec_t p = std::max(precision(), other.precision()) + 32;
  Float lo(p), hi(p), olo(p), ohi(p);
  mpfr_sub(lo.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  mpfr_add(hi.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  mpfr_sub(olo.get(), other.mid_.get(), other.rad_.get(), MPFR_RNDD);
  mpfr_add(ohi.get(), other.mid_.get(), other.rad_.get(), MPFR_RNDU);
  return mpfr_lessequal_p(lo.get(), olo.get()) && mpfr_lessequal_p(ohi.get(), hi.get());
}

Ball mul(const Ball& x, const Ball& y, mpfr_prec_t precision) {
  Ball r(precision);
  const int t = mpfr_mul(r.mid_.get(), x.mid_.get(), y.mid_.get(), MPFR_RNDN);
  fma_up(r.rad_, abs_up(x.mid_), y.rad_);
  fma_up(r.rad_, abs_up(y.mid_), x.rad_);
  fma_up(r.rad_, x.rad_, y.rad_);
  r.add_rounding_error(t);
  return r;
}

Ball add(const Ball& x, const Ball& y, mpfr_prec_t precision) {
  Ball r(precision);
  const int t = mpfr_add(r.mid_.get(), x.mid_.get(), y.mid_.get(), MPFR_RNDN);
  mpfr_add(r.rad_.get(), x.rad_.get(), y.rad_.get(), MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball sub(const Ball& x, const Ball& y, mpfr_prec_t precision) {
  Ball r(precision);
  const int t = mpfr_sub(r.mid_.get(), x.mid_.get(), y.mid_.get(), MPFR_RNDN);
  mpfr_add(r.rad_.get(), x.rad_.get(), y.rad_.get(), MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball div(const Ball& x, const Ball& y, mpfr_prec_t precision) {
  // |x/y - xm/ym| <= (xr + |xm/ym| yr) / (|ym| - yr)
  Float denom(kRad);
  {
    Float aym(y.precision() + 8);
    mpfr_abs(aym.get(), y.mid_.get(), MPFR_RNDD);
    mpfr_sub(denom.get(), aym.get(), y.rad_.get(), MPFR_RNDD);
  }
  if (mpfr_sgn(denom.get()) <= 0) throw std::domain_error("ball division by a ball containing 0");

  Ball r(precision);
  const int t = mpfr_div(r.mid_.get(), x.mid_.get(), y.mid_.get(), MPFR_RNDN);
  Float quotient = abs_up(r.mid_);
  if (t != 0) {
    Float ulp(kRad);
    mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(r.mid_.get()) - precision, MPFR_RNDU);
    mpfr_add(quotient.get(), quotient.get(), ulp.get(), MPFR_RNDU);
  }
  Float num(kRad);
  mpfr_set(num.get(), x.rad_.get(), MPFR_RNDU);
  fma_up(num, quotient, y.rad_);
  mpfr_div(r.rad_.get(), num.get(), denom.get(), MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball scale(const Ball& x, std::uint64_t factor, mpfr_prec_t precision) {
  Ball r(precision);
  const int t = mpfr_mul_ui(r.mid_.get(), x.mid_.get(), factor, MPFR_RNDN);
  mpfr_mul_ui(r.rad_.get(), x.rad_.get(), factor, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball pow(const Ball& base, std::uint64_t e, mpfr_prec_t precision, std::uint64_t* mults) {
  if (e == 0) return Ball(1L, precision);
  // left-to-right square and multiply
  Ball acc = add(base, Ball(precision), precision);
  for (int bit = std::bit_width(e) - 2; bit >= 0; --bit) {
    acc = mul(acc, acc, precision);
    if (mults) ++*mults;
    if ((e >> bit) & 1U) {
      acc = mul(acc, base, precision);
      if (mults) ++*mults;
    }
  }
  return acc;
}

// --------------------------------------------------------------- UnitPoint

double circle_distance(double x, double y) {
  const double d = std::fabs(x - y);
  return std::min(d, 1.0 - d);
}

namespace {

// value in [0,1) to binary64; returns the conversion error bound
double to_unit_double(mpfr_srcptr f, double& out) {
  out = mpfr_get_d(f, MPFR_RNDN);
  const double err = mpfr_cmp_d(f, out) == 0 ? 0.0 : 0x1p-54;
  if (out >= 1.0) out = 0.0;
  return err;
}

double sum_up(double a, double b, double c) { return (a + b + c) * (1.0 + 0x1p-50); }

}  // namespace

UnitPoint frac_point(const Ball& x) {
  Float f(x.precision());
  int t = mpfr_frac(f.get(), x.mid().get(), MPFR_RNDN);
  double frac_err = 0.0;
  if (mpfr_sgn(f.get()) < 0) t |= mpfr_add_ui(f.get(), f.get(), 1, MPFR_RNDN);
  if (t != 0) frac_err = std::ldexp(1.0, -static_cast<int>(std::min<mpfr_prec_t>(x.precision(), 1000)));
  UnitPoint p;
  const double conv_err = to_unit_double(f.get(), p.value);
  p.error = sum_up(x.rad_double(), conv_err, frac_err);
  return p;
}

UnitPoint frac_point(const ExactReal& x) {
  const ExactReal r = x.frac();
  UnitPoint p;
  if (r.sign() == 0) return p;
  Float f(static_cast<mpfr_prec_t>(std::max<std::size_t>(r.numerator_bits(), 2)));
  mpfr_set_z_2exp(f.get(), r.numerator().get_mpz_t(), static_cast<mpfr_exp_t>(r.exponent()),
                  MPFR_RNDN);
  p.error = to_unit_double(f.get(), p.value);
  return p;
}

// -------------------------------------------------------------- precision

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 0.25)) throw std::invalid_argument("delta must lie in (0, 1/4)");
  if (delta < kMinDelta) throw std::invalid_argument("delta below 2^-50 cannot be certified");
}

mpfr_prec_t checked_precision(std::uint64_t bits) {
  if (bits > kMaxWorkingPrecision) {
    throw PrecisionBudgetExceeded("working precision of " + std::to_string(bits) +
                                  " bits exceeds the budget");
  }
  return static_cast<mpfr_prec_t>(std::max<std::uint64_t>(bits, 2));
}

std::uint64_t required_precision(std::uint64_t d, double alpha_upper, double delta,
                                 std::uint64_t mults) {
  if (d == 0 || mults == 0) throw std::invalid_argument("required_precision: d and mults must be positive");
  if (!(alpha_upper > 1.0) || !std::isfinite(alpha_upper)) {
    throw std::invalid_argument("required_precision: alpha_upper must exceed 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("required_precision: delta must lie in (0,1)");

  const double magnitude = static_cast<double>(d) * std::log2(alpha_upper);
  if (!(magnitude <= 0x1p62)) {
    throw PrecisionBudgetExceeded("required_precision: d*log2(alpha) exceeds 2^62 bits");
  }
  const auto magnitude_bits = static_cast<std::uint64_t>(std::ceil(magnitude));
  const auto tolerance_bits = static_cast<std::uint64_t>(std::ceil(-std::log2(delta)));
  const auto chain_bits = static_cast<std::uint64_t>(std::bit_width(mults));  // ceil(log2(mults+1))
  return magnitude_bits + tolerance_bits + chain_bits + 16;
}

UnitPoint pow_frac(const ExactReal& alpha, std::uint64_t d, double delta) {
  check_delta(delta);
  if (!alpha.greater_than_one()) throw std::invalid_argument("pow_frac: alpha must exceed 1");
  if (d == 0) throw std::invalid_argument("pow_frac: d must be positive");

  const std::uint64_t mults = 2 * static_cast<std::uint64_t>(std::bit_width(d));
  std::uint64_t bits = required_precision(d, alpha.to_double_up(), delta, mults);
  UnitPoint p;
  for (int attempt = 0; attempt < 2; ++attempt, bits *= 2) {
    const mpfr_prec_t prec = checked_precision(bits);
    p = frac_point(pow(Ball(alpha, prec), d, prec));
    if (p.error <= delta) return p;
  }
  throw IndeterminateFrac("pow_frac: radius " + std::to_string(p.error) +
                          " exceeds delta after precision doubling");
}

}  // namespace ppc
