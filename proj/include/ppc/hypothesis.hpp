#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "ppc/families.hpp"

namespace ppc {

/// [a, b] with 1 < a < b < inf.
struct IntervalSpec {
  double a = 0.0;
  double b = 0.0;

  IntervalSpec() = default;
  IntervalSpec(double a_, double b_);
  double length() const { return b - a; }
};

enum class Status { Holds, Fails, SampledHolds, Skipped };
std::string to_string(Status s);

/// Concrete evidence for a failed (or worst-case) condition.
struct Witness {
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  std::optional<double> alpha;
  double lhs = 0.0;  // left side of the violated inequality
  double rhs = 0.0;  // right side
  std::string description;
};

struct Verdict {
  Status status = Status::Skipped;
  std::optional<Witness> witness;
  std::string note;
};

/// Strictly increasing polynomial degrees for n < n_max.
Verdict check_condition1(const SequenceFamily& family, std::uint64_t n_max);

/// Increasing and convex differences, sampled on a uniform grid; upgraded
/// to Holds for pure-power families.
Verdict check_condition2(const SequenceFamily& family, const IntervalSpec& interval,
                         std::uint64_t n_max, std::size_t grid_size);

struct Constants {
  double c_ab = 0.0;
  double C_ab = 0.0;
  bool certified = false;  // closed-form bounds rather than grid extrema
  // grid extrema over all pairs and nodes
  double grid_derivative_ratio_min = 0.0;
  double grid_value_ratio_min = 0.0;
  double grid_value_ratio_max = 0.0;
  std::optional<Witness> failure;  // a nonpositive ratio
};

Constants estimate_constants(const SequenceFamily& family, const IntervalSpec& interval,
                             std::uint64_t n_max, std::size_t grid_size);

enum class LogBase { Natural, Binary };

/// (2 d2/d1 - 1) log C + (d1 - d2) log a - log(d2 (d2/d1 - 1)).
double condition5_lhs(std::uint64_t d1, std::uint64_t d2, double C, double a,
                      LogBase base = LogBase::Natural);

/// condition5_lhs(...) <= -3 log n2 in the given base.
bool condition5_holds(std::uint64_t d1, std::uint64_t d2, double C, double a, std::uint64_t n2,
                      LogBase base = LogBase::Natural);

struct N1Result {
  std::optional<std::uint64_t> N1;
  /// Every row n1 in [N1, n2_verify_max) is certified for all n2 beyond the
  /// verify bound; otherwise the result holds up to n2_verify_max only.
  bool tail_certified = false;
  std::optional<Witness> witness;  // worst violation when N1 is absent
  std::uint64_t n1_search_max = 0;
  std::uint64_t n2_verify_max = 0;
};

N1Result find_N1(const SequenceFamily& family, const IntervalSpec& interval, double C,
                 std::uint64_t n1_search_max, std::uint64_t n2_verify_max,
                 std::uint64_t n1_start = 1);

struct HypothesisBounds {
  std::uint64_t n_max = 10;
  std::size_t grid_size = 64;
  std::uint64_t n1_search_max = 200;
  std::uint64_t n2_verify_max = 500;

  /// Defaults sized to each family's precision cost.
  static HypothesisBounds defaults_for(const SequenceFamily& family);
};

struct HypothesisReport {
  SequenceFamily family;
  IntervalSpec interval;
  std::array<Verdict, 5> conditions;
  std::optional<double> c_ab;
  std::optional<double> C_ab;
  N1Result n1;
  HypothesisBounds bounds;
};

HypothesisReport check_hypotheses(const SequenceFamily& family, const IntervalSpec& interval,
                                  const HypothesisBounds& bounds);

}  // namespace ppc
