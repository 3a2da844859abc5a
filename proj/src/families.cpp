#include "ppc/families.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "ppc/errors.hpp"

namespace ppc {

SequenceFamily parse_family(std::string_view spec) {
  auto parse_k = [&](std::string_view prefix) -> unsigned {
    const std::string_view rest = spec.substr(prefix.size());
    unsigned k = 0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), k);
    if (ec != std::errc() || ptr != rest.data() + rest.size() || rest.empty() || k == 0) {
      throw std::invalid_argument("bad family exponent in '" + std::string(spec) + "'");
    }
    return k;
  };
  if (spec.starts_with("monomial:k=")) return SequenceFamily::monomial(parse_k("monomial:k="));
  if (spec.starts_with("geomsum:k=")) return SequenceFamily::geometric_sum(parse_k("geomsum:k="));
  if (spec == "factorial") return SequenceFamily::factorial();
  if (spec == "linpow") return SequenceFamily::linear_power();
  if (spec == "kronecker") return SequenceFamily::kronecker();
  throw std::invalid_argument("unknown family '" + std::string(spec) + "'");
}

std::string to_string(const SequenceFamily& family) {
  switch (family.kind) {
    case FamilyKind::Monomial: return "monomial:k=" + std::to_string(family.k);
    case FamilyKind::GeometricSum: return "geomsum:k=" + std::to_string(family.k);
    case FamilyKind::Factorial: return "factorial";
    case FamilyKind::LinearPower: return "linpow";
    case FamilyKind::Kronecker: return "kronecker";
  }
  return "?";
}

std::uint64_t degree(const SequenceFamily& family, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("degree: n must be >= 1");
  switch (family.kind) {
    case FamilyKind::Monomial:
    case FamilyKind::GeometricSum: {
      std::uint64_t d = 1;
      for (unsigned i = 0; i < family.k; ++i) {
        if (__builtin_mul_overflow(d, n, &d)) {
          throw PrecisionBudgetExceeded("degree n^k overflows 64 bits at n=" + std::to_string(n));
        }
      }
      return d;
    }
    case FamilyKind::Factorial: {
      if (n > kMaxFactorialIndex) {
        throw PrecisionBudgetExceeded("factorial family is capped at n <= 20 (got n=" +
                                      std::to_string(n) + ")");
      }
      std::uint64_t d = 1;
      for (std::uint64_t i = 2; i <= n; ++i) d *= i;
      return d;
    }
    case FamilyKind::LinearPower:
    case FamilyKind::Kronecker:
      return n;
  }
  return n;
}

std::uint64_t polynomial_degree(const SequenceFamily& family, std::uint64_t n) {
  if (family.kind == FamilyKind::Kronecker) {
    if (n == 0) throw std::invalid_argument("polynomial_degree: n must be >= 1");
    return 1;
  }
  return degree(family, n);
}

namespace {

std::uint64_t exponent_of(const SequenceFamily& family, std::uint64_t n) {
  const std::uint64_t d = degree(family, n);
  if (family.kind == FamilyKind::GeometricSum) {
    if (d == UINT64_MAX) throw PrecisionBudgetExceeded("degree overflow");
    return d + 1;
  }
  return d;
}

// Extra bits lost dividing by (alpha - 1).
std::uint64_t division_guard_bits(const ExactReal& alpha) {
  const double gap = alpha.to_double_down() - 1.0;
  if (gap >= 1.0) return 2;
  return static_cast<std::uint64_t>(std::ceil(-std::log2(gap))) + 2;
}

Ball geometric_value(const Ball& power, const Ball& alpha, mpfr_prec_t prec) {
  const Ball one(1L, prec);
  return div(sub(power, one, prec), sub(alpha, one, prec), prec);
}

void check_alpha(const SequenceFamily& family, const ExactReal& alpha) {
  if (family.kind == FamilyKind::Kronecker) {
    if (alpha.sign() <= 0) throw std::invalid_argument("kronecker family needs alpha > 0");
  } else if (!alpha.greater_than_one()) {
    throw std::invalid_argument("alpha must exceed 1");
  }
}

UnitPoint geometric_frac(const ExactReal& alpha, std::uint64_t e, double delta) {
  const std::uint64_t mults = 2 * static_cast<std::uint64_t>(std::bit_width(e)) + 2;
  std::uint64_t bits =
      required_precision(e, alpha.to_double_up(), delta, mults) + division_guard_bits(alpha);
  UnitPoint p;
  for (int attempt = 0; attempt < 2; ++attempt, bits *= 2) {
    const mpfr_prec_t prec = checked_precision(bits);
    const Ball a(alpha, prec);
    p = frac_point(geometric_value(pow(a, e, prec), a, prec));
    if (p.error <= delta) return p;
  }
  throw IndeterminateFrac("eval_frac: radius exceeds delta after precision doubling");
}

}  // namespace

UnitPoint eval_frac(const SequenceFamily& family, const ExactReal& alpha, std::uint64_t n,
                    double delta) {
  check_delta(delta);
  check_alpha(family, alpha);
  if (n == 0) throw std::invalid_argument("eval_frac: n must be >= 1");
  switch (family.kind) {
    case FamilyKind::Kronecker:
      return frac_point(alpha.scaled(n));
    case FamilyKind::GeometricSum:
      try {
        return geometric_frac(alpha, exponent_of(family, n), delta);
      } catch (const IndeterminateFrac& e) {
        throw IndeterminateFrac(e.what(), n);
      }
    default:
      try {
        return pow_frac(alpha, degree(family, n), delta);
      } catch (const IndeterminateFrac& e) {
        throw IndeterminateFrac(e.what(), n);
      }
  }
}

namespace {

struct AttemptFailure {
  std::uint64_t index;
  double error;
};

// One pass over the orbit at fixed precision. Returns the first index
// whose certified error exceeds delta.
std::optional<AttemptFailure> incremental_pass(const SequenceFamily& family,
                                               const ExactReal& alpha,
                                               const std::vector<std::uint64_t>& exponents,
                                               double delta, mpfr_prec_t prec,
                                               std::vector<UnitPoint>& points) {
  const Ball alpha_ball(alpha, prec);
  Ball running(1L, prec);
  std::uint64_t cached_gap = 0;
  std::optional<Ball> gap_power;
  const auto alpha_bits = static_cast<std::uint64_t>(alpha.numerator_bits());

  std::uint64_t previous = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    const std::uint64_t gap = exponents[i] - previous;
    previous = exponents[i];
    if (!gap_power || gap != cached_gap) {
      if (alpha_bits * gap <= static_cast<std::uint64_t>(prec)) {
        // exact, and short: the full-precision product stays cheap
        const ExactReal exact = alpha.pow(gap);
        gap_power.emplace(exact, static_cast<mpfr_prec_t>(
                                     std::max<std::size_t>(exact.numerator_bits(), 2)));
      } else {
        gap_power.emplace(pow(alpha_ball, gap, prec));
      }
      cached_gap = gap;
    }
    running = mul(running, *gap_power, prec);

    const UnitPoint p = family.kind == FamilyKind::GeometricSum
                            ? frac_point(geometric_value(running, alpha_ball, prec))
                            : frac_point(running);
    if (!(p.error <= delta)) return AttemptFailure{i + 1, p.error};
    points[i] = p;
  }
  return std::nullopt;
}

}  // namespace

Orbit orbit(const SequenceFamily& family, const ExactReal& alpha, std::uint64_t N, double delta) {
  check_delta(delta);
  check_alpha(family, alpha);
  if (N == 0) throw std::invalid_argument("orbit: N must be >= 1");

  Orbit out{family, alpha, std::vector<UnitPoint>(N), delta};
  if (family.kind == FamilyKind::Kronecker) {
    for (std::uint64_t n = 1; n <= N; ++n) out.points[n - 1] = frac_point(alpha.scaled(n));
    return out;
  }

  std::vector<std::uint64_t> exponents(N);
  std::uint64_t mults = 0;
  std::uint64_t previous = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    exponents[n - 1] = exponent_of(family, n);
    mults += 1 + 2 * static_cast<std::uint64_t>(std::bit_width(exponents[n - 1] - previous));
    previous = exponents[n - 1];
  }
  if (family.kind == FamilyKind::GeometricSum) mults += 2;

  std::uint64_t bits = required_precision(exponents.back(), alpha.to_double_up(), delta, mults);
  if (family.kind == FamilyKind::GeometricSum) bits += division_guard_bits(alpha);

  std::optional<AttemptFailure> failure;
  for (int attempt = 0; attempt < 2; ++attempt, bits *= 2) {
    failure = incremental_pass(family, alpha, exponents, delta, checked_precision(bits),
                               out.points);
    if (!failure) return out;
  }
  throw IndeterminateFrac("orbit: radius " + std::to_string(failure->error) +
                              " exceeds delta at n=" + std::to_string(failure->index),
                          failure->index);
}

// ------------------------------------------------------------- differences

namespace {

void check_pair(const SequenceFamily& family, std::uint64_t n1, std::uint64_t n2) {
  if (family.kind == FamilyKind::Kronecker) {
    throw std::invalid_argument("differences are not defined for the kronecker family");
  }
  if (n1 == 0 || n2 <= n1) throw std::invalid_argument("differences need n2 > n1 >= 1");
}

// d/dx of 1 + x + ... + x^d = (d x^(d+1) - (d+1) x^d + 1) / (x-1)^2
Ball geometric_derivative(const Ball& x, std::uint64_t d, mpfr_prec_t prec) {
  const Ball one(1L, prec);
  const Ball xd = pow(x, d, prec);
  const Ball xd1 = mul(xd, x, prec);
  const Ball num = add(sub(scale(xd1, d, prec), scale(xd, d + 1, prec), prec), one, prec);
  const Ball xm1 = sub(x, one, prec);
  return div(num, mul(xm1, xm1, prec), prec);
}

}  // namespace

Ball diff_value(const SequenceFamily& family, const ExactReal& alpha, std::uint64_t n1,
                std::uint64_t n2, mpfr_prec_t precision) {
  check_pair(family, n1, n2);
  const Ball x(alpha, precision);
  const std::uint64_t d1 = degree(family, n1);
  const std::uint64_t d2 = degree(family, n2);
  if (family.kind == FamilyKind::GeometricSum) {
    const Ball one(1L, precision);
    return div(sub(pow(x, d2 + 1, precision), pow(x, d1 + 1, precision), precision),
               sub(x, one, precision), precision);
  }
  return sub(pow(x, d2, precision), pow(x, d1, precision), precision);
}

Ball diff_derivative(const SequenceFamily& family, const ExactReal& alpha, std::uint64_t n1,
                     std::uint64_t n2, mpfr_prec_t precision) {
  check_pair(family, n1, n2);
  const Ball x(alpha, precision);
  const std::uint64_t d1 = degree(family, n1);
  const std::uint64_t d2 = degree(family, n2);
  if (family.kind == FamilyKind::GeometricSum) {
    return sub(geometric_derivative(x, d2, precision), geometric_derivative(x, d1, precision),
               precision);
  }
  return sub(scale(pow(x, d2 - 1, precision), d2, precision),
             scale(pow(x, d1 - 1, precision), d1, precision), precision);
}

double diff_value(const SequenceFamily& family, double alpha, std::uint64_t n1, std::uint64_t n2) {
  return diff_value(family, ExactReal::from_double(alpha), n1, n2).mid_double();
}

double diff_derivative(const SequenceFamily& family, double alpha, std::uint64_t n1,
                       std::uint64_t n2) {
  return diff_derivative(family, ExactReal::from_double(alpha), n1, n2).mid_double();
}

}  // namespace ppc
