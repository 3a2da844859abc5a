#include "ppc/secondmoment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ppc/errors.hpp"
#include "ppc/paircorr.hpp"
#include "ppc/parallel.hpp"
#include "ppc/splitmix64.hpp"

namespace ppc {

std::vector<double> quadrature_nodes(const QuadratureSpec& quad, const IntervalSpec& interval) {
  if (quad.nodes < 2) throw std::invalid_argument("quadrature needs K >= 2 nodes");
  std::vector<double> nodes(quad.nodes);
  const double K = static_cast<double>(quad.nodes);
  if (quad.mode == QuadratureMode::Midpoint) {
    for (std::uint64_t i = 0; i < quad.nodes; ++i) {
      nodes[i] = interval.a + (static_cast<double>(i) + 0.5) * interval.length() / K;
    }
  } else {
    SplitMix64 rng(quad.seed);
    for (auto& x : nodes) x = rng.uniform(interval.a, interval.b);
  }
  return nodes;
}

namespace {

std::string node_context(std::size_t i, double alpha) {
  return " [quadrature node " + std::to_string(i) + ", alpha=" + std::to_string(alpha) + "]";
}

// R2 at every N of N_list for each node, node-major.
std::vector<std::vector<double>> node_statistics(const SequenceFamily& family,
                                                 const std::vector<double>& nodes, double s,
                                                 std::span<const std::uint64_t> N_list,
                                                 double delta, unsigned threads) {
  std::vector<std::vector<double>> stats(nodes.size());
  parallel_for(nodes.size(), threads, [&](std::size_t i) {
    try {
      const auto curve = ppc_curve(family, ExactReal::from_double(nodes[i]), s, N_list, delta);
      stats[i].reserve(curve.size());
      for (const auto& [N, r] : curve) stats[i].push_back(r);
    } catch (const IndeterminateFrac& e) {
      throw IndeterminateFrac(e.what() + node_context(i, nodes[i]), e.index());
    } catch (const PrecisionBudgetExceeded& e) {
      throw PrecisionBudgetExceeded(e.what() + node_context(i, nodes[i]));
    }
  });
  return stats;
}

double integrate(const std::vector<double>& values, double s, double width) {
  double sum = 0.0;
  for (const double r : values) sum += (r - 2.0 * s) * (r - 2.0 * s);
  return width * sum / static_cast<double>(values.size());
}

}  // namespace

VarianceEstimate variance_at(const SequenceFamily& family, const IntervalSpec& interval, double s,
                             std::uint64_t N, const QuadratureSpec& quad, double delta,
                             unsigned threads) {
  const std::uint64_t list[] = {N};
  const SecondMomentSeries series = second_moment_series(family, interval, s, list, quad, delta, threads);
  return {series.entries.front().V, series.entries.front().node_values};
}

DecayFit decay_fit(std::span<const std::pair<std::uint64_t, double>> entries) {
  if (entries.size() < 3) throw std::invalid_argument("decay_fit needs at least 3 entries");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i].second > 0.0)) {
      throw std::invalid_argument("decay_fit: nonpositive V at entry " + std::to_string(i));
    }
  }
  const double n = static_cast<double>(entries.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [N, V] : entries) {
    mx += std::log(static_cast<double>(N));
    my += std::log(V);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [N, V] : entries) {
    const double dx = std::log(static_cast<double>(N)) - mx;
    sxy += dx * (std::log(V) - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("decay_fit needs at least two distinct N");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

SecondMomentSeries second_moment_series(const SequenceFamily& family, const IntervalSpec& interval,
                                        double s, std::span<const std::uint64_t> N_list,
                                        const QuadratureSpec& quad, double delta,
                                        unsigned threads) {
  if (!(s > 0.0)) throw std::invalid_argument("s must be positive");
  if (N_list.empty()) throw std::invalid_argument("empty N list");
  if (!std::is_sorted(N_list.begin(), N_list.end()) ||
      std::adjacent_find(N_list.begin(), N_list.end()) != N_list.end()) {
    throw std::invalid_argument("N list must be strictly ascending");
  }
  if (N_list.front() < 2) throw std::invalid_argument("N must be >= 2");

  const std::vector<double> nodes = quadrature_nodes(quad, interval);
  const auto stats = node_statistics(family, nodes, s, N_list, delta, threads);

  SecondMomentSeries series{family, interval, s, quad, {}, std::nullopt};
  std::vector<std::pair<std::uint64_t, double>> points;
  for (std::size_t j = 0; j < N_list.size(); ++j) {
    SecondMomentEntry e;
    e.N = N_list[j];
    e.node_values.reserve(nodes.size());
    for (const auto& row : stats) e.node_values.push_back(row[j]);
    e.V = integrate(e.node_values, s, interval.length());
    points.emplace_back(e.N, e.V);
    series.entries.push_back(std::move(e));
  }
  const bool fittable = points.size() >= 3 &&
                        std::all_of(points.begin(), points.end(), [](const auto& p) { return p.second > 0.0; });
  if (fittable) series.fit = decay_fit(points);
  return series;
}

}  // namespace ppc
