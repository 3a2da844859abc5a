#include "doctest.h"
#include "oracles.hpp"
#include "ppc/errors.hpp"
#include "ppc/families.hpp"
#include "ppc/splitmix64.hpp"

using namespace ppc;

TEST_SUITE("families") {

TEST_CASE("family spec grammar round trips") {
  for (const char* spec : {"monomial:k=2", "geomsum:k=3", "factorial", "linpow", "kronecker"}) {
    CHECK(to_string(parse_family(spec)) == spec);
  }
  for (const char* bad : {"Monomial:k=2", "monomial", "monomial:k=0", "monomial:k=", "geomsum:k=2x", "linpow ", ""}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_family(bad), std::invalid_argument);
  }
}

TEST_CASE("degrees") {
  CHECK(degree(SequenceFamily::monomial(2), 5) == 25);
  CHECK(degree(SequenceFamily::factorial(), 4) == 24);
  CHECK(degree(SequenceFamily::geometric_sum(3), 2) == 8);
  CHECK(degree(SequenceFamily::linear_power(), 9) == 9);
  CHECK(degree(SequenceFamily::kronecker(), 9) == 9);
  CHECK(polynomial_degree(SequenceFamily::kronecker(), 9) == 1);
  CHECK(degree(SequenceFamily::factorial(), 20) == 2432902008176640000ULL);
  CHECK_THROWS_AS(degree(SequenceFamily::factorial(), 21), PrecisionBudgetExceeded);
  CHECK_THROWS_AS(degree(SequenceFamily::monomial(5), 1'000'000), PrecisionBudgetExceeded);
}

TEST_CASE("degrees strictly increase up to 10^6") {
  for (const auto f : {SequenceFamily::monomial(2), SequenceFamily::monomial(3), SequenceFamily::geometric_sum(2),
                       SequenceFamily::linear_power()}) {
    std::uint64_t prev = 0;
    for (std::uint64_t n = 1; n <= 1'000'000; ++n) {
      const std::uint64_t d = degree(f, n);
      if (d <= prev) FAIL("degree not increasing at n=" << n);
      prev = d;
    }
  }
  std::uint64_t prev = 0;
  for (std::uint64_t n = 1; n <= kMaxFactorialIndex; ++n) {
    CHECK(degree(SequenceFamily::factorial(), n) > prev);
    prev = degree(SequenceFamily::factorial(), n);
  }
}

TEST_CASE("eval_frac examples") {
  const ExactReal a(3, -1);
  CHECK(eval_frac(SequenceFamily::geometric_sum(1), a, 2, 1e-12).value == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(eval_frac(SequenceFamily::monomial(2), a, 2, 1e-12).value == 0.0625);
  CHECK(eval_frac(SequenceFamily::kronecker(), a, 7, 1e-12).value == 0.5);
}

TEST_CASE("orbit examples") {
  const Orbit o = orbit(SequenceFamily::monomial(2), ExactReal(3, -1), 3, 0x1p-30);
  REQUIRE(o.points.size() == 3);
  CHECK(o.points[0].value == 0.5);
  CHECK(o.points[1].value == 0.0625);
  CHECK(o.points[2].value == 0.443359375);
  for (const auto& p : orbit(SequenceFamily::linear_power(), ExactReal(1, 1), 5, 0x1p-30).points) {
    CHECK(p.value == 0.0);
  }
  CHECK_THROWS_AS(orbit(SequenceFamily::factorial(), parse_alpha("1.8", 128), 25, 1e-12),
                  PrecisionBudgetExceeded);
}

TEST_CASE("orbit matches independent evaluation per index") {
  const double delta = 0x1p-40;
  const ExactReal alpha = parse_alpha("1.8", 128);
  const auto family = SequenceFamily::monomial(2);
  const Orbit o = orbit(family, alpha, 200, delta);
  for (std::uint64_t n = 1; n <= 200; ++n) {
    const UnitPoint single = pow_frac(alpha, degree(family, n), delta);
    const UnitPoint& inc = o.points[n - 1];
    CHECK(inc.error <= delta);
    if (circle_distance(inc.value, single.value) > 2 * delta) FAIL_CHECK("mismatch at n=" << n);
  }
}

TEST_CASE("orbit matches the exact oracle across families") {
  const double delta = 0x1p-36;
  const ExactReal alpha = parse_alpha("1.37", 40);
  const mpq_class q = oracle::to_mpq(alpha);
  for (const auto family : {SequenceFamily::monomial(2), SequenceFamily::geometric_sum(2),
                            SequenceFamily::factorial(), SequenceFamily::linear_power(),
                            SequenceFamily::kronecker()}) {
    const std::uint64_t N = family.kind == FamilyKind::Factorial ? 6 : 30;
    const Orbit o = orbit(family, alpha, N, delta);
    for (std::uint64_t n = 1; n <= N; ++n) {
      const std::uint64_t d = degree(family, n);
      mpq_class exact;
      if (family.kind == FamilyKind::Kronecker) {
        exact = q * n;
      } else if (family.kind == FamilyKind::GeometricSum) {
        exact = (oracle::to_mpq(alpha.pow(d + 1)) - 1) / (q - 1);
      } else {
        exact = oracle::to_mpq(alpha.pow(d));
      }
      CAPTURE(to_string(family));
      CAPTURE(n);
      CHECK(oracle::circle_gap(o.points[n - 1].value, oracle::frac(exact)) <= delta);
    }
  }
}

TEST_CASE("orbit is deterministic") {
  const ExactReal alpha = parse_alpha("1.65", 128);
  const Orbit a = orbit(SequenceFamily::geometric_sum(2), alpha, 120, 1e-12);
  const Orbit b = orbit(SequenceFamily::geometric_sum(2), alpha, 120, 1e-12);
  CHECK(a.points == b.points);
}

TEST_CASE("difference values and derivatives") {
  CHECK(diff_value(SequenceFamily::monomial(1), 2.0, 1, 3) == 6.0);
  CHECK(diff_derivative(SequenceFamily::monomial(1), 2.0, 1, 3) == 11.0);
  CHECK(diff_value(SequenceFamily::monomial(2), 1.5, 1, 2) == 3.5625);
  CHECK(diff_value(SequenceFamily::geometric_sum(2), 1.5, 1, 2) == doctest::Approx(10.6875).epsilon(1e-15));
  // direct summation x^4 + x^3 + x^2 at 1.5
  CHECK(diff_value(SequenceFamily::geometric_sum(2), 1.5, 1, 2) ==
        doctest::Approx(5.0625 + 3.375 + 2.25).epsilon(1e-15));
  CHECK_THROWS_AS(diff_value(SequenceFamily::kronecker(), 1.5, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(diff_value(SequenceFamily::monomial(2), 1.5, 2, 2), std::invalid_argument);
}

TEST_CASE("sampled monotone convex differences on [1.1, 3]") {
  for (const auto family : {SequenceFamily::monomial(2), SequenceFamily::geometric_sum(2),
                            SequenceFamily::factorial()}) {
    const std::uint64_t n_top = family.kind == FamilyKind::Factorial ? 7 : 12;
    for (std::uint64_t n2 = 2; n2 <= n_top; ++n2) {
      for (std::uint64_t n1 = 1; n1 < n2; ++n1) {
        const int grid = 24;
        std::vector<Ball> values;
        for (int i = 0; i < grid; ++i) {
          const ExactReal x = ExactReal::from_double(1.1 + 1.9 * i / (grid - 1));
          CHECK(diff_derivative(family, x, n1, n2, 512).is_positive());
          values.push_back(diff_value(family, x, n1, n2, 512));
        }
        for (int i = 1; i + 1 < grid; ++i) {
          const Ball second = sub(add(values[i + 1], values[i - 1], 512), scale(values[i], 2, 512), 512);
          CHECK(second.mid_double() + second.rad_double() >= 0.0);
        }
      }
    }
  }
}

}
