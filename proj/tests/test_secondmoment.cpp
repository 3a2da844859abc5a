#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "ppc/report_json.hpp"
#include "ppc/secondmoment.hpp"

using namespace ppc;

TEST_SUITE("secondmoment") {

TEST_CASE("decay fit on synthetic series") {
  const std::vector<std::pair<std::uint64_t, double>> inverse{{100, 1.0 / 100}, {200, 1.0 / 200}, {400, 1.0 / 400}};
  CHECK(decay_fit(inverse).exponent == doctest::Approx(-1.0).epsilon(1e-14));
  const std::vector<std::pair<std::uint64_t, double>> flat{{100, 5}, {200, 5}, {400, 5}};
  CHECK(decay_fit(flat).exponent == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(decay_fit(flat).log_constant == doctest::Approx(std::log(5.0)));
  const std::vector<std::pair<std::uint64_t, double>> two{{100, 1}, {200, 2}};
  CHECK_THROWS_AS(decay_fit(two), std::invalid_argument);
  const std::vector<std::pair<std::uint64_t, double>> zero{{100, 1}, {200, 0}, {400, 1}};
  try {
    decay_fit(zero);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("entry 1") != std::string::npos);
  }
}

TEST_CASE("quadrature nodes") {
  const IntervalSpec I(1.5, 1.6);
  const auto mid = quadrature_nodes({QuadratureMode::Midpoint, 4, 0}, I);
  REQUIRE(mid.size() == 4);
  CHECK(mid[0] == doctest::Approx(1.5125));
  CHECK(mid[3] == doctest::Approx(1.5875));
  const auto r1 = quadrature_nodes({QuadratureMode::Random, 50, 99}, I);
  const auto r2 = quadrature_nodes({QuadratureMode::Random, 50, 99}, I);
  const auto r3 = quadrature_nodes({QuadratureMode::Random, 50, 100}, I);
  CHECK(r1 == r2);
  CHECK(r1 != r3);
  for (const double x : r1) {
    CHECK(x >= 1.5);
    CHECK(x < 1.6);
  }
  CHECK_THROWS_AS(quadrature_nodes({QuadratureMode::Midpoint, 1, 0}, I), std::invalid_argument);
}

TEST_CASE("variance is deterministic and thread independent") {
  const IntervalSpec I(1.5, 1.6);
  const QuadratureSpec quad{QuadratureMode::Random, 6, 31337};
  const auto a = variance_at(SequenceFamily::monomial(2), I, 1.0, 120, quad, 1e-12, 1);
  const auto b = variance_at(SequenceFamily::monomial(2), I, 1.0, 120, quad, 1e-12, 4);
  CHECK(a.node_values == b.node_values);
  CHECK(a.V == b.V);
  CHECK(a.V >= 0.0);
  double manual = 0.0;
  for (const double r : a.node_values) manual += (r - 2.0) * (r - 2.0);
  CHECK(a.V == doctest::Approx(0.1 * manual / 6));
}

TEST_CASE("Kronecker control keeps V away from zero") {
  const IntervalSpec I(1.55, 1.70);
  // midpoint nodes sit within 1e-16 of rationals with small denominators,
  // where {n alpha} nearly repeats and R2 is large rather than 0
  const auto mid = variance_at(SequenceFamily::kronecker(), I, 0.1, 5000, {QuadratureMode::Midpoint, 8, 0}, 1e-12, 2);
  CHECK(mid.V > 0.15 * 0.02);
  const auto rnd = variance_at(SequenceFamily::kronecker(), I, 0.1, 5000, {QuadratureMode::Random, 8, 17}, 1e-12, 2);
  CHECK(rnd.V > 0.15 * 0.02);
  const auto zero_nodes = std::count(rnd.node_values.begin(), rnd.node_values.end(), 0.0);
  CHECK(zero_nodes >= 4);
}

TEST_CASE("negative control separation") {
  const QuadratureSpec quad{QuadratureMode::Midpoint, 32, 0};
  const std::uint64_t klist[] = {625, 5000};
  const auto kron = second_moment_series(SequenceFamily::kronecker(), IntervalSpec(1.5, 1.6), 1.0, klist, quad,
                                         1e-12, 2);
  CHECK(kron.entries[1].V >= kron.entries[0].V / 2);

  const std::uint64_t mlist[] = {125, 1000};
  const auto mono = second_moment_series(SequenceFamily::monomial(2), IntervalSpec(1.5, 1.6), 1.0, mlist, quad,
                                         1e-12, 2);
  CHECK(mono.entries[1].V <= mono.entries[0].V / 4);
}

TEST_CASE("series output formats") {
  const std::uint64_t list[] = {50, 100, 200};
  const auto s = second_moment_series(SequenceFamily::monomial(2), IntervalSpec(1.5, 1.6), 1.0, list,
                                      {QuadratureMode::Midpoint, 4, 0}, 1e-12, 1);
  REQUIRE(s.entries.size() == 3);
  CHECK(s.fit);
  const std::string csv = to_csv(s);
  CHECK(csv.rfind("N,V,K,mode,seed,s,a,b,family\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  const Json j = to_json(s);
  CHECK(j["schema"] == "second-moment v1");
  CHECK(j["entries"].size() == 3);
  const std::uint64_t bad[] = {100, 50};
  CHECK_THROWS_AS(second_moment_series(SequenceFamily::monomial(2), IntervalSpec(1.5, 1.6), 1.0, bad,
                                       {QuadratureMode::Midpoint, 4, 0}, 1e-12, 1),
                  std::invalid_argument);
}

}
