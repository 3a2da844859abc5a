#include "ppc/measure.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ppc/errors.hpp"

namespace ppc {

CircleInterval CircleInterval::arc(double c, double d) {
  if (!(0.0 <= c && c < d && d <= 1.0)) throw std::invalid_argument("arc needs 0 <= c < d <= 1");
  return {Kind::Arc, c, d};
}

CircleInterval CircleInterval::wrap(double c, double d) {
  if (!(0.0 <= d && d < c && c < 1.0)) throw std::invalid_argument("wrap needs 0 <= d < c < 1");
  return {Kind::Wrap, c, d};
}

CircleInterval CircleInterval::from_endpoints(double c, double d) {
  return c < d ? arc(c, d) : wrap(c, d);
}

MonotoneFunction power_function(unsigned d) {
  if (d == 0) throw std::invalid_argument("power_function: d must be positive");
  const double e = d;
  return {[e](double x) { return std::pow(x, e); },
          [e](double x) { return e * std::pow(x, e - 1.0); },
          "alpha^" + std::to_string(d)};
}

namespace {

double term_value(const SequenceFamily& f, double d, double x) {
  if (f.kind == FamilyKind::GeometricSum) return (std::pow(x, d + 1.0) - 1.0) / (x - 1.0);
  return std::pow(x, d);
}

double term_derivative(const SequenceFamily& f, double d, double x) {
  if (f.kind == FamilyKind::GeometricSum) {
    const double xm1 = x - 1.0;
    return (d * std::pow(x, d + 1.0) - (d + 1.0) * std::pow(x, d) + 1.0) / (xm1 * xm1);
  }
  return d * std::pow(x, d - 1.0);
}

}  // namespace

MonotoneFunction family_difference(const SequenceFamily& family, std::uint64_t n1,
                                   std::uint64_t n2) {
  if (family.kind == FamilyKind::Kronecker) throw std::invalid_argument("kronecker differences are degenerate");
  if (n1 == 0 || n2 <= n1) throw std::invalid_argument("family_difference needs n2 > n1 >= 1");
  const double d1 = static_cast<double>(degree(family, n1));
  const double d2 = static_cast<double>(degree(family, n2));
  return {[=](double x) { return term_value(family, d2, x) - term_value(family, d1, x); },
          [=](double x) { return term_derivative(family, d2, x) - term_derivative(family, d1, x); },
          to_string(family) + " f_" + std::to_string(n2) + "-f_" + std::to_string(n1)};
}

MonotoneFunction family_term(const SequenceFamily& family, std::uint64_t n) {
  const double d = static_cast<double>(degree(family, n));
  if (family.kind == FamilyKind::Kronecker) {
    return {[d](double x) { return d * x; }, [d](double) { return d; }, "kronecker f_" + std::to_string(n)};
  }
  return {[=](double x) { return term_value(family, d, x); },
          [=](double x) { return term_derivative(family, d, x); },
          to_string(family) + " f_" + std::to_string(n)};
}

namespace {

struct Range {
  double a, b, ga, gb;
};

Range evaluate_range(const MonotoneFunction& g, const IntervalSpec& interval) {
  Range r{interval.a, interval.b, g.value(interval.a), g.value(interval.b)};
  if (!std::isfinite(r.ga) || !std::isfinite(r.gb)) throw LevelCapExceeded("g is not finite on [a,b]");
  if (!(r.ga < r.gb)) throw NonMonotone("g(a) >= g(b)");
  return r;
}

void check_levels(const Range& r) {
  const double levels = std::ceil(r.gb) - std::floor(r.ga) + 1.0;
  if (levels > static_cast<double>(kLevelCap)) {
    throw LevelCapExceeded("level count " + std::to_string(levels) + " exceeds the cap of 10^6");
  }
}

// alpha with g(alpha) = y, bracketed in [r.a, r.b].
double invert(const MonotoneFunction& g, const Range& r, double y, double resolution) {
  if (y <= r.ga) return r.a;
  if (y >= r.gb) return r.b;
  double lo = r.a, hi = r.b, glo = r.ga, ghi = r.gb;
  while (hi - lo > resolution) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double gm = g.value(mid);
    if (!(glo <= gm && gm <= ghi)) throw NonMonotone("bracketing failed near alpha=" + std::to_string(mid));
    if (gm < y) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
      ghi = gm;
    }
  }
  return lo + 0.5 * (hi - lo);
}

// Inverts bands [M + lo_offset, M + hi_offset] for every integer M.
std::vector<PreimageInterval> invert_bands(const MonotoneFunction& g, const Range& r,
                                           double lo_offset, double hi_offset, double tol) {
  check_levels(r);
  const auto first = static_cast<std::int64_t>(std::floor(r.ga - hi_offset));
  const auto last = static_cast<std::int64_t>(std::ceil(r.gb - lo_offset));
  const double resolution = tol / (static_cast<double>(last - first + 1) + 1.0);

  std::vector<PreimageInterval> out;
  for (std::int64_t M = first; M <= last; ++M) {
    const double y_lo = std::max(static_cast<double>(M) + lo_offset, r.ga);
    const double y_hi = std::min(static_cast<double>(M) + hi_offset, r.gb);
    if (y_lo > y_hi) continue;
    PreimageInterval p;
    p.M = M;
    p.left = invert(g, r, y_lo, resolution);
    p.right = invert(g, r, y_hi, resolution);
    p.tolerance = resolution;
    out.push_back(p);
  }
  return out;
}

}  // namespace

MeasureResult level_set_measure(const MonotoneFunction& g, const IntervalSpec& interval,
                                const CircleInterval& target, double tol) {
  if (!(tol > 0.0 && tol <= 1e-6)) throw std::invalid_argument("tol must lie in (0, 1e-6]");
  const Range r = evaluate_range(g, interval);

  // a wrap [c,1) u [0,d] at level M is the single band [M + c, M + 1 + d]
  const double lo = target.c();
  const double hi = target.kind() == CircleInterval::Kind::Arc ? target.d() : 1.0 + target.d();

  MeasureResult result;
  result.interval = interval;
  result.intervals = invert_bands(g, r, lo, hi, tol);
  for (const auto& p : result.intervals) {
    result.measure += p.length();
    result.tolerance += 2.0 * p.tolerance;
  }
  result.main_term = target.length() * interval.length();
  result.residual = result.measure - result.main_term;
  result.derivative_at_a = g.derivative(interval.a);
  return result;
}

LemmaBounds lemma_bounds_check(const MeasureResult& result, const CircleInterval& target) {
  const double L = target.length();
  const double width = result.interval.length();
  LemmaBounds b;
  b.lower_main = L * width / (1.0 + L);
  b.upper_unbounded = L >= 1.0;
  b.upper_main = b.upper_unbounded ? std::numeric_limits<double>::infinity() : L * width / (1.0 - L);
  const double unit = L / result.derivative_at_a;  // L(I) / g'(a)
  b.residual_scaled = std::fabs(result.residual) / unit;
  const double below = (b.lower_main - result.measure) / unit;
  const double above = b.upper_unbounded ? 0.0 : (result.measure - b.upper_main) / unit;
  b.sandwich_constant = std::max({0.0, below, above});
  return b;
}

std::vector<PreimageInterval> preimage_intervals(const MonotoneFunction& g,
                                                 const IntervalSpec& interval, double halfwidth,
                                                 double tol) {
  if (!(halfwidth >= 0.0 && halfwidth <= 0.5)) throw std::invalid_argument("halfwidth must lie in [0, 1/2]");
  if (!(tol > 0.0 && tol <= 1e-6)) throw std::invalid_argument("tol must lie in (0, 1e-6]");
  const Range r = evaluate_range(g, interval);
  return invert_bands(g, r, -halfwidth, halfwidth, tol);
}

}  // namespace ppc
