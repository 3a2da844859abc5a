#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ppc/hpreal.hpp"

namespace ppc {

enum class FamilyKind {
  Monomial,      // x^(n^k)
  GeometricSum,  // x^(n^k) + ... + x + 1
  Factorial,     // x^(n!)
  LinearPower,   // x^n
  Kronecker,     // n x
};

/// A polynomial sequence f_n. Immutable descriptor.
struct SequenceFamily {
  FamilyKind kind = FamilyKind::Monomial;
  unsigned k = 1;  // exponent for Monomial / GeometricSum

  static SequenceFamily monomial(unsigned k) { return {FamilyKind::Monomial, k}; }
  static SequenceFamily geometric_sum(unsigned k) { return {FamilyKind::GeometricSum, k}; }
  static SequenceFamily factorial() { return {FamilyKind::Factorial, 1}; }
  static SequenceFamily linear_power() { return {FamilyKind::LinearPower, 1}; }
  static SequenceFamily kronecker() { return {FamilyKind::Kronecker, 1}; }

  /// Each f_n is a single power x^(d_n).
  bool is_pure_power() const {
    return kind == FamilyKind::Monomial || kind == FamilyKind::Factorial ||
           kind == FamilyKind::LinearPower;
  }

  friend bool operator==(const SequenceFamily&, const SequenceFamily&) = default;
};

/// Parses `monomial:k=<int>`, `geomsum:k=<int>`, `factorial`, `linpow`,
/// `kronecker` (exact, case-sensitive).
SequenceFamily parse_family(std::string_view spec);
std::string to_string(const SequenceFamily& family);

/// Largest index accepted for the factorial family.
inline constexpr std::uint64_t kMaxFactorialIndex = 20;

/// d_n: n^k, n!, or n. Throws PrecisionBudgetExceeded on overflow.
std::uint64_t degree(const SequenceFamily& family, std::uint64_t n);

/// Degree of f_n as a polynomial in x (1 for every Kronecker term).
std::uint64_t polynomial_degree(const SequenceFamily& family, std::uint64_t n);

/// Certified {f_n(alpha)}.
UnitPoint eval_frac(const SequenceFamily& family, const ExactReal& alpha, std::uint64_t n,
                    double delta);

struct Orbit {
  SequenceFamily family;
  ExactReal alpha;
  std::vector<UnitPoint> points;  // points[n-1] = {f_n(alpha)}
  double delta = 0.0;
};

/// First N terms by incremental power maintenance. IndeterminateFrac
/// carries the failing index.
Orbit orbit(const SequenceFamily& family, const ExactReal& alpha, std::uint64_t N, double delta);

/// (f_{n2} - f_{n1})(alpha) and its derivative, as balls at `precision`
/// bits. Kronecker and n2 <= n1 are rejected.
Ball diff_value(const SequenceFamily& family, const ExactReal& alpha, std::uint64_t n1,
                std::uint64_t n2, mpfr_prec_t precision = 256);
Ball diff_derivative(const SequenceFamily& family, const ExactReal& alpha, std::uint64_t n1,
                     std::uint64_t n2, mpfr_prec_t precision = 256);

double diff_value(const SequenceFamily& family, double alpha, std::uint64_t n1, std::uint64_t n2);
double diff_derivative(const SequenceFamily& family, double alpha, std::uint64_t n1,
                       std::uint64_t n2);

}  // namespace ppc
