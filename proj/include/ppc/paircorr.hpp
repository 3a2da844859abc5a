#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ppc/families.hpp"
#include "ppc/hpreal.hpp"

namespace ppc {

struct PairCorrelationResult {
  double s = 0.0;
  std::uint64_t N = 0;
  std::uint64_t ordered_count = 0;  // #{(m,n): m != n, ||x_n - x_m|| <= s/N}
  double statistic = 0.0;           // ordered_count / N
};

struct DiscrepancyResult {
  std::uint64_t N = 0;
  double d_star = 0.0;
};

/// Ordered pair count within circle distance s/N, by sort and two-pointer
/// sweep. Throws TooBlurry when some point error exceeds s/(100 N).
PairCorrelationResult pair_count(std::span<const UnitPoint> points, double s);

/// Same count over raw values with an explicit threshold; no blur guard.
std::uint64_t ordered_pairs_within(std::span<const double> values, double threshold);

/// Statistic for each prefix length in `N_list` (ascending) of one orbit
/// computed at max(N_list).
std::vector<std::pair<std::uint64_t, double>> ppc_curve(const SequenceFamily& family,
                                                        const ExactReal& alpha, double s,
                                                        std::span<const std::uint64_t> N_list,
                                                        double delta);

/// Prefix version over an already computed point list.
std::vector<std::pair<std::uint64_t, double>> ppc_curve(std::span<const UnitPoint> points,
                                                        double s,
                                                        std::span<const std::uint64_t> N_list);

/// D*_N = max_i max(i/N - x_(i), x_(i) - (i-1)/N).
DiscrepancyResult star_discrepancy(std::span<const UnitPoint> points);

/// Sorted circle gaps between consecutive sorted points, wrap gap included.
std::vector<double> gap_spectrum(std::span<const UnitPoint> points);

/// Values within `tolerance` of each other merged; returns the distinct
/// representatives of a sorted gap list.
std::vector<double> distinct_values(std::span<const double> sorted, double tolerance);

// ------------------------------------------------------- ppc-points v1 files

/// Header `# ppc-points v1 N=<int>`, optional `# ...` comment lines, then one
/// value per line with 30 significant digits.
void write_points(std::ostream& out, std::span<const UnitPoint> points,
                  const std::string& comment = {});

/// Parses a point-set file. Point errors are taken from a `# delta=<x>`
/// comment line when present, else 0. Throws std::invalid_argument.
std::vector<UnitPoint> read_points(std::istream& in);

}  // namespace ppc
