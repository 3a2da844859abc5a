#include "ppc/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ppc/errors.hpp"

namespace ppc {

IntervalSpec::IntervalSpec(double a_, double b_) : a(a_), b(b_) {
  if (!(1.0 < a && a < b && std::isfinite(b))) {
    throw std::invalid_argument("interval must satisfy 1 < a < b < inf");
  }
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Holds: return "holds";
    case Status::Fails: return "fails";
    case Status::SampledHolds: return "sampled-holds";
    case Status::Skipped: return "skipped";
  }
  return "?";
}

namespace {

constexpr mpfr_prec_t kCheckPrecision = 256;
constexpr double kConvexityTolerance = 1e-30;
constexpr double kSafetyMargin = 0.01;

std::vector<double> uniform_grid(const IntervalSpec& interval, std::size_t size) {
  std::vector<double> grid(size);
  const double step = interval.length() / static_cast<double>(size - 1);
  for (std::size_t i = 0; i < size; ++i) grid[i] = interval.a + static_cast<double>(i) * step;
  grid.back() = interval.b;
  return grid;
}

double ratio(const Ball& x, const Ball& y) { return div(x, y, kCheckPrecision).mid_double(); }

}  // namespace

Verdict check_condition1(const SequenceFamily& family, std::uint64_t n_max) {
  if (n_max < 2) throw std::invalid_argument("check_condition1: n_max must be >= 2");
  if (family.kind == FamilyKind::Factorial) n_max = std::min(n_max, kMaxFactorialIndex);
  std::uint64_t previous = polynomial_degree(family, 1);
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    const std::uint64_t d = polynomial_degree(family, n);
    if (d <= previous) {
      Witness w;
      w.n1 = n - 1;
      w.n2 = n;
      w.lhs = static_cast<double>(d);
      w.rhs = static_cast<double>(previous);
      w.description = family.kind == FamilyKind::Kronecker
                          ? "deg(f_n)=1 for all n"
                          : "deg(f_" + std::to_string(n) + ") <= deg(f_" + std::to_string(n - 1) + ")";
      return {Status::Fails, w, {}};
    }
    previous = d;
  }
  return {Status::Holds, std::nullopt, "checked n < " + std::to_string(n_max)};
}

Verdict check_condition2(const SequenceFamily& family, const IntervalSpec& interval,
                         std::uint64_t n_max, std::size_t grid_size) {
  if (grid_size < 3) throw std::invalid_argument("check_condition2: grid_size must be >= 3");
  if (family.kind == FamilyKind::Kronecker) {
    return {Status::Skipped, std::nullopt, "differences undefined for kronecker"};
  }
  const std::vector<double> grid = uniform_grid(interval, grid_size);
  std::vector<ExactReal> nodes;
  for (const double x : grid) nodes.push_back(ExactReal::from_double(x));

  for (std::uint64_t n2 = 2; n2 <= n_max; ++n2) {
    for (std::uint64_t n1 = 1; n1 < n2; ++n1) {
      std::vector<Ball> values;
      values.reserve(grid_size);
      for (std::size_t i = 0; i < grid_size; ++i) {
        const Ball dv = diff_derivative(family, nodes[i], n1, n2, kCheckPrecision);
        if (!dv.is_positive()) {
          Witness w{n1, n2, grid[i], dv.mid_double(), 0.0, "derivative not positive"};
          return {Status::Fails, w, {}};
        }
        values.push_back(diff_value(family, nodes[i], n1, n2, kCheckPrecision));
      }
      const Ball& scale_ref = values.back();
      for (std::size_t i = 1; i + 1 < grid_size; ++i) {
        const Ball second = sub(add(values[i + 1], values[i - 1], kCheckPrecision),
                                scale(values[i], 2, kCheckPrecision), kCheckPrecision);
        const double rel = ratio(second, scale_ref);
        if (rel < -kConvexityTolerance) {
          Witness w{n1, n2, grid[i], rel, -kConvexityTolerance, "negative second difference"};
          return {Status::Fails, w, {}};
        }
      }
    }
  }
  const std::string grid_note = "grid " + std::to_string(grid_size) + " points, n <= " +
                                std::to_string(n_max);
  if (family.is_pure_power()) {
    // x^d2 - x^d1 with d2 > d1 is increasing and convex on (1, inf)
    return {Status::Holds, std::nullopt, "closed form; " + grid_note};
  }
  return {Status::SampledHolds, std::nullopt, grid_note};
}

Constants estimate_constants(const SequenceFamily& family, const IntervalSpec& interval,
                             std::uint64_t n_max, std::size_t grid_size) {
  if (family.kind == FamilyKind::Kronecker) {
    throw std::invalid_argument("estimate_constants: kronecker family has no constants");
  }
  if (grid_size < 2 || n_max < 2) throw std::invalid_argument("estimate_constants: bounds too small");
  const std::vector<double> grid = uniform_grid(interval, grid_size);

  Constants c;
  c.grid_derivative_ratio_min = std::numeric_limits<double>::infinity();
  c.grid_value_ratio_min = std::numeric_limits<double>::infinity();
  c.grid_value_ratio_max = -std::numeric_limits<double>::infinity();
  for (const double x : grid) {
    const ExactReal alpha = ExactReal::from_double(x);
    const Ball xb(alpha, kCheckPrecision);
    for (std::uint64_t n2 = 2; n2 <= n_max; ++n2) {
      const std::uint64_t d2 = degree(family, n2);
      const Ball top = pow(xb, d2, kCheckPrecision);
      for (std::uint64_t n1 = 1; n1 < n2; ++n1) {
        const double rd = ratio(diff_derivative(family, alpha, n1, n2, kCheckPrecision),
                                scale(top, d2, kCheckPrecision));
        const double rv = ratio(diff_value(family, alpha, n1, n2, kCheckPrecision), top);
        if (!(rd > 0.0) || !(rv > 0.0)) {
          c.failure = Witness{n1, n2, x, std::min(rd, rv), 0.0, "nonpositive ratio"};
          return c;
        }
        c.grid_derivative_ratio_min = std::min(c.grid_derivative_ratio_min, rd);
        c.grid_value_ratio_min = std::min(c.grid_value_ratio_min, rv);
        c.grid_value_ratio_max = std::max(c.grid_value_ratio_max, rv);
      }
    }
  }

  if (family.is_pure_power()) {
    // (x^d2 - x^d1) / x^d2 = 1 - x^(d1-d2) lies in [1 - 1/a, 1), and
    // (d2 x^(d2-1) - d1 x^(d1-1)) / (d2 x^d2) >= (x - 1) / x^2, which is
    // unimodal on (1, inf) so its minimum over [a,b] sits at an endpoint.
    const double floor_ratio = 1.0 - 1.0 / interval.a;
    const auto slope_floor = [](double x) { return (x - 1.0) / (x * x); };
    c.C_ab = 1.0 / floor_ratio;
    c.c_ab = std::min(slope_floor(interval.a), slope_floor(interval.b));
    c.certified = true;
  } else {
    c.c_ab = (1.0 - kSafetyMargin) * c.grid_derivative_ratio_min;
    c.C_ab = (1.0 + kSafetyMargin) *
             std::max({c.grid_value_ratio_max, 1.0 / c.grid_value_ratio_min, 1.0});
  }
  return c;
}

double condition5_lhs(std::uint64_t d1, std::uint64_t d2, double C, double a, LogBase base) {
  if (d1 == 0 || d2 <= d1) throw std::invalid_argument("condition5_lhs needs d2 > d1 >= 1");
  if (!(C > 1.0) || !(a > 1.0)) throw std::invalid_argument("condition5_lhs needs C > 1, a > 1");
  const auto lg = [base](double x) { return base == LogBase::Natural ? std::log(x) : std::log2(x); };
  const double r = static_cast<double>(d2) / static_cast<double>(d1);
  const double gap = static_cast<double>(d2 - d1);
  // log(d2 (d2/d1 - 1)) = log d2 + log(d2 - d1) - log d1
  const double last = lg(static_cast<double>(d2)) + lg(gap) - lg(static_cast<double>(d1));
  return (2.0 * r - 1.0) * lg(C) - gap * lg(a) - last;
}

bool condition5_holds(std::uint64_t d1, std::uint64_t d2, double C, double a, std::uint64_t n2,
                      LogBase base) {
  const double rhs = base == LogBase::Natural ? -3.0 * std::log(static_cast<double>(n2))
                                              : -3.0 * std::log2(static_cast<double>(n2));
  return condition5_lhs(d1, d2, C, a, base) <= rhs;
}

namespace {

// For fixed d1 and every d2 >= x0 (with d_n >= n):
//   lhs + 3 log n2 <= beta d2 + 2 log d2 + (d1 log a - log C) + log d1,
// beta = 2 log C / d1 - log a. The bound is concave in d2 and decreasing
// once d2 >= 2/|beta|, so checking x0 covers the whole tail.
bool row_tail_certified(double d1, double x0, double C, double a) {
  const double beta = 2.0 * std::log(C) / d1 - std::log(a);
  if (!(beta < 0.0)) return false;
  if (x0 < 2.0 / -beta) return false;
  const double bound = beta * x0 + 2.0 * std::log(x0) + d1 * std::log(a) - std::log(C) + std::log(d1);
  return bound <= 0.0;
}

}  // namespace

N1Result find_N1(const SequenceFamily& family, const IntervalSpec& interval, double C,
                 std::uint64_t n1_search_max, std::uint64_t n2_verify_max, std::uint64_t n1_start) {
  if (n1_search_max < 2 || n2_verify_max < 2 || n1_start == 0) {
    throw std::invalid_argument("find_N1: bounds must be >= 2");
  }
  N1Result result;
  result.n1_search_max = n1_search_max;
  result.n2_verify_max = n2_verify_max;

  std::vector<std::uint64_t> d(n2_verify_max + 1);
  for (std::uint64_t n = 1; n <= n2_verify_max; ++n) d[n] = polynomial_degree(family, n);

  const double a = interval.a;
  // rows_ok_from[n]: every row n1 in [n, n2_verify_max) holds for all n2
  std::vector<bool> rows_ok_from(n2_verify_max + 1, true);
  Witness worst;
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (std::uint64_t n1 = n2_verify_max - 1; n1 >= n1_start; --n1) {
    bool row_ok = true;
    for (std::uint64_t n2 = n1 + 1; n2 <= n2_verify_max; ++n2) {
      const double rhs = -3.0 * std::log(static_cast<double>(n2));
      double lhs = 0.0;
      if (d[n2] <= d[n1]) {
        lhs = std::numeric_limits<double>::infinity();  // degrees not increasing
      } else {
        lhs = condition5_lhs(d[n1], d[n2], C, a);
      }
      if (!(lhs <= rhs)) {
        row_ok = false;
        if (lhs - rhs > worst_excess) {
          worst_excess = lhs - rhs;
          worst = Witness{n1, n2, std::nullopt, lhs, rhs, "condition (5) violated"};
        }
      }
    }
    rows_ok_from[n1] = row_ok && rows_ok_from[n1 + 1];
    if (n1 == 1) break;
  }

  for (std::uint64_t n = n1_start; n <= std::min(n1_search_max, n2_verify_max - 1); ++n) {
    if (rows_ok_from[n]) {
      result.N1 = n;
      break;
    }
  }
  if (!result.N1) {
    result.witness = worst;
    return result;
  }

  std::optional<std::uint64_t> next_degree;
  try {
    next_degree = polynomial_degree(family, n2_verify_max + 1);
  } catch (const PrecisionBudgetExceeded&) {
  }
  bool tail = next_degree.has_value();
  for (std::uint64_t n1 = *result.N1; tail && n1 < n2_verify_max; ++n1) {
    tail = d[n1] >= n1 && row_tail_certified(static_cast<double>(d[n1]),
                                             static_cast<double>(*next_degree), C, a);
  }
  result.tail_certified = tail;
  return result;
}

HypothesisBounds HypothesisBounds::defaults_for(const SequenceFamily& family) {
  HypothesisBounds b;
  if (family.kind == FamilyKind::Factorial) {
    b.n_max = 8;
    b.n1_search_max = 10;
    b.n2_verify_max = 12;
  }
  return b;
}

HypothesisReport check_hypotheses(const SequenceFamily& family, const IntervalSpec& interval,
                                  const HypothesisBounds& bounds) {
  HypothesisReport report;
  report.family = family;
  report.interval = interval;
  report.bounds = bounds;
  report.n1.n1_search_max = bounds.n1_search_max;
  report.n1.n2_verify_max = bounds.n2_verify_max;

  report.conditions[0] = check_condition1(family, std::max(bounds.n2_verify_max, bounds.n_max));
  if (report.conditions[0].status == Status::Fails) {
    for (std::size_t i = 1; i < 5; ++i) {
      report.conditions[i] = {Status::Skipped, std::nullopt, "condition (1) fails"};
    }
    return report;
  }

  report.conditions[1] = check_condition2(family, interval, bounds.n_max, bounds.grid_size);
  if (report.conditions[1].status == Status::Fails) {
    for (std::size_t i = 2; i < 5; ++i) {
      report.conditions[i] = {Status::Skipped, std::nullopt, "condition (2) fails"};
    }
    return report;
  }

  const Constants k = estimate_constants(family, interval, bounds.n_max, bounds.grid_size);
  if (k.failure) {
    report.conditions[2] = {Status::Fails, k.failure, {}};
    report.conditions[3] = {Status::Fails, k.failure, {}};
    report.conditions[4] = {Status::Skipped, std::nullopt, "no valid C_ab"};
    return report;
  }
  report.c_ab = k.c_ab;
  report.C_ab = k.C_ab;
  const Status constant_status = k.certified ? Status::Holds : Status::SampledHolds;
  const std::string constant_note = k.certified ? "closed-form bound" : "grid extremum with 1% margin";
  report.conditions[2] = {constant_status, std::nullopt, constant_note};
  report.conditions[3] = {constant_status, std::nullopt, constant_note};

  report.n1 = find_N1(family, interval, k.C_ab, bounds.n1_search_max, bounds.n2_verify_max);
  if (!report.n1.N1) {
    report.conditions[4] = {Status::Fails, report.n1.witness, {}};
  } else if (report.n1.tail_certified) {
    report.conditions[4] = {Status::Holds, std::nullopt, "checked pairs plus analytic tail bound"};
  } else {
    report.conditions[4] = {Status::SampledHolds, std::nullopt,
                            "verified up to n2=" + std::to_string(bounds.n2_verify_max) + " only"};
  }
  return report;
}

}  // namespace ppc
