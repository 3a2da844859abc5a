#include "ppc/paircorr.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ppc/errors.hpp"

namespace ppc {

namespace {

std::vector<double> sorted_values(std::span<const UnitPoint> points) {
  std::vector<double> v(points.size());
  std::transform(points.begin(), points.end(), v.begin(),
                 [](const UnitPoint& p) { return p.value; });
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

std::uint64_t ordered_pairs_within(std::span<const double> values, double threshold) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();

  // For sorted v and fixed i, {j > i : v[j]-v[i] <= t} is a prefix (i, r]
  // and {j > i : 1-(v[j]-v[i]) <= t} is a suffix [l, n); both pointers
  // only move forward as i grows.
  std::uint64_t unordered = 0;
  std::size_t r = 0;
  std::size_t l = 0;
  for (std::size_t i = 0; i < n; ++i) {
    r = std::max(r, i);
    while (r + 1 < n && v[r + 1] - v[i] <= threshold) ++r;
    l = std::max(l, i + 1);
    while (l < n && !(1.0 - (v[l] - v[i]) <= threshold)) ++l;
    const std::size_t overlap = r >= l ? r - l + 1 : 0;
    unordered += (r - i) + (n - l) - overlap;
  }
  return 2 * unordered;
}

PairCorrelationResult pair_count(std::span<const UnitPoint> points, double s) {
  if (points.size() < 2) throw std::invalid_argument("pair_count needs at least 2 points");
  if (!(s > 0.0)) throw std::invalid_argument("pair_count: s must be positive");
  const auto N = static_cast<std::uint64_t>(points.size());
  const double threshold = s / static_cast<double>(N);

  const double bound = s / (100.0 * static_cast<double>(N));
  double max_error = 0.0;
  for (const auto& p : points) max_error = std::max(max_error, p.error);
  if (max_error > bound) {
    throw TooBlurry("point error " + std::to_string(max_error) + " exceeds s/(100N) = " +
                        std::to_string(bound),
                    max_error, bound);
  }

  std::vector<double> v(points.size());
  std::transform(points.begin(), points.end(), v.begin(),
                 [](const UnitPoint& p) { return p.value; });
  PairCorrelationResult r;
  r.s = s;
  r.N = N;
  r.ordered_count = ordered_pairs_within(v, threshold);
  r.statistic = static_cast<double>(r.ordered_count) / static_cast<double>(N);
  return r;
}

std::vector<std::pair<std::uint64_t, double>> ppc_curve(std::span<const UnitPoint> points,
                                                        double s,
                                                        std::span<const std::uint64_t> N_list) {
  std::vector<std::pair<std::uint64_t, double>> curve;
  curve.reserve(N_list.size());
  std::uint64_t last = 0;
  for (const std::uint64_t N : N_list) {
    if (N <= last) throw std::invalid_argument("ppc_curve: N_list must be strictly ascending");
    if (N > points.size()) throw std::invalid_argument("ppc_curve: N exceeds available points");
    last = N;
    curve.emplace_back(N, pair_count(points.first(N), s).statistic);
  }
  return curve;
}

std::vector<std::pair<std::uint64_t, double>> ppc_curve(const SequenceFamily& family,
                                                        const ExactReal& alpha, double s,
                                                        std::span<const std::uint64_t> N_list,
                                                        double delta) {
  if (N_list.empty()) throw std::invalid_argument("ppc_curve: empty N_list");
  const Orbit o = orbit(family, alpha, N_list.back(), delta);
  return ppc_curve(o.points, s, N_list);
}

DiscrepancyResult star_discrepancy(std::span<const UnitPoint> points) {
  if (points.empty()) throw std::invalid_argument("star_discrepancy of an empty set");
  const std::vector<double> v = sorted_values(points);
  const auto N = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double upper = static_cast<double>(i + 1) / N - v[i];
    const double lower = v[i] - static_cast<double>(i) / N;
    d = std::max({d, upper, lower});
  }
  return {static_cast<std::uint64_t>(v.size()), d};
}

std::vector<double> gap_spectrum(std::span<const UnitPoint> points) {
  if (points.size() < 2) throw std::invalid_argument("gap_spectrum needs at least 2 points");
  const std::vector<double> v = sorted_values(points);
  std::vector<double> gaps;
  gaps.reserve(v.size());
  for (std::size_t i = 0; i + 1 < v.size(); ++i) gaps.push_back(v[i + 1] - v[i]);
  gaps.push_back(1.0 - v.back() + v.front());
  std::sort(gaps.begin(), gaps.end());
  return gaps;
}

std::vector<double> distinct_values(std::span<const double> sorted, double tolerance) {
  std::vector<double> out;
  for (const double x : sorted) {
    if (out.empty() || x - out.back() > tolerance) out.push_back(x);
  }
  return out;
}

// ----------------------------------------------------------------- files

void write_points(std::ostream& out, std::span<const UnitPoint> points,
                  const std::string& comment) {
  out << "# ppc-points v1 N=" << points.size() << '\n';
  std::istringstream lines(comment);
  for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  char buf[64];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.29e", p.value);
    out << buf << '\n';
  }
}

std::vector<UnitPoint> read_points(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty point-set file");
  constexpr std::string_view kHeader = "# ppc-points v1 N=";
  if (!line.starts_with(kHeader)) throw std::invalid_argument("missing ppc-points v1 header");
  std::uint64_t N = 0;
  {
    const char* first = line.data() + kHeader.size();
    const char* last = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(first, last, N);
    if (ec != std::errc() || ptr != last) throw std::invalid_argument("bad N in header");
  }

  double error = 0.0;
  std::vector<UnitPoint> points;
  points.reserve(N);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view kDelta = "# delta=";
      if (line.starts_with(kDelta)) error = std::stod(line.substr(kDelta.size()));
      continue;
    }
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), x);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw std::invalid_argument("bad point value '" + line + "'");
    }
    if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("point outside [0,1): " + line);
    points.push_back({x, 0.0});
  }
  if (points.size() != N) {
    throw std::invalid_argument("header N=" + std::to_string(N) + " but file has " +
                                std::to_string(points.size()) + " points");
  }
  for (auto& p : points) p.error = error;
  return points;
}

}  // namespace ppc
