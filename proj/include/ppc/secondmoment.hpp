#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ppc/families.hpp"
#include "ppc/hypothesis.hpp"

namespace ppc {

enum class QuadratureMode { Midpoint, Random };

struct QuadratureSpec {
  QuadratureMode mode = QuadratureMode::Midpoint;
  std::uint64_t nodes = 32;  // K >= 2
  std::uint64_t seed = 0;    // random mode only
};

/// Midpoint nodes a + (i + 1/2)(b - a)/K, or K SplitMix64 draws on [a,b).
std::vector<double> quadrature_nodes(const QuadratureSpec& quad, const IntervalSpec& interval);

struct VarianceEstimate {
  double V = 0.0;
  std::vector<double> node_values;  // R2(s, N, alpha_i) per node
};

/// (b - a)/K * sum_i (R2(s, N, alpha_i) - 2s)^2.
VarianceEstimate variance_at(const SequenceFamily& family, const IntervalSpec& interval, double s,
                             std::uint64_t N, const QuadratureSpec& quad, double delta,
                             unsigned threads = 1);

struct DecayFit {
  double exponent = 0.0;      // slope of log V against log N
  double log_constant = 0.0;  // intercept
};

/// Ordinary least squares of log V on log N. Needs >= 3 entries with V > 0.
DecayFit decay_fit(std::span<const std::pair<std::uint64_t, double>> entries);

struct SecondMomentEntry {
  std::uint64_t N = 0;
  double V = 0.0;
  std::vector<double> node_values;
};

struct SecondMomentSeries {
  SequenceFamily family;
  IntervalSpec interval;
  double s = 0.0;
  QuadratureSpec quad;
  std::vector<SecondMomentEntry> entries;  // ascending N
  std::optional<DecayFit> fit;             // absent with < 3 entries or V = 0
};

/// One orbit per node at max(N_list); every N reuses its prefix. Nodes run
/// on `threads` workers and are reduced in node order.
SecondMomentSeries second_moment_series(const SequenceFamily& family, const IntervalSpec& interval,
                                        double s, std::span<const std::uint64_t> N_list,
                                        const QuadratureSpec& quad, double delta,
                                        unsigned threads = 1);

}  // namespace ppc
