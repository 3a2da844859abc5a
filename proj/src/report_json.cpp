#include "ppc/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ppc {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string mode_name(QuadratureMode m) { return m == QuadratureMode::Midpoint ? "midpoint" : "random"; }

}  // namespace

Json to_json(const Witness& w) {
  Json j;
  j["n1"] = w.n1;
  j["n2"] = w.n2;
  j["alpha"] = w.alpha ? Json(*w.alpha) : Json(nullptr);
  j["lhs"] = finite_or_null(w.lhs);
  j["rhs"] = finite_or_null(w.rhs);
  j["description"] = w.description;
  return j;
}

Json to_json(const Verdict& v) {
  Json j;
  j["status"] = to_string(v.status);
  if (v.witness) j["witness"] = to_json(*v.witness);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Json to_json(const HypothesisReport& r) {
  Json j;
  j["schema"] = "hypothesis-report v1";
  j["family"] = to_string(r.family);
  j["a"] = r.interval.a;
  j["b"] = r.interval.b;
  Json conditions = Json::array();
  for (std::size_t i = 0; i < r.conditions.size(); ++i) {
    Json c = to_json(r.conditions[i]);
    c["condition"] = i + 1;
    conditions.push_back(std::move(c));
  }
  j["conditions"] = std::move(conditions);
  j["c_ab"] = r.c_ab ? Json(*r.c_ab) : Json(nullptr);
  j["C_ab"] = r.C_ab ? Json(*r.C_ab) : Json(nullptr);
  j["N1"] = r.n1.N1 ? Json(*r.n1.N1) : Json(nullptr);
  j["N1_tail_certified"] = r.n1.tail_certified;
  j["bounds"] = {{"n_max", r.bounds.n_max},
                 {"grid_size", r.bounds.grid_size},
                 {"n1_search_max", r.bounds.n1_search_max},
                 {"n2_verify_max", r.bounds.n2_verify_max}};
  return j;
}

Json to_json(const MeasureResult& r, const LemmaBounds& lemma) {
  Json j;
  j["schema"] = "measure-result v1";
  j["measure"] = r.measure;
  j["main_term"] = r.main_term;
  j["residual"] = r.residual;
  j["derivative_at_a"] = r.derivative_at_a;
  Json intervals = Json::array();
  for (const auto& p : r.intervals) intervals.push_back({{"M", p.M}, {"left", p.left}, {"right", p.right}});
  j["intervals"] = std::move(intervals);
  j["tol"] = r.tolerance;
  j["lemma"] = {{"lower_main", lemma.lower_main},
                {"upper_main", finite_or_null(lemma.upper_main)},
                {"upper_unbounded", lemma.upper_unbounded},
                {"residual_scaled", lemma.residual_scaled},
                {"sandwich_constant", lemma.sandwich_constant}};
  return j;
}

Json to_json(const PairCorrelationResult& r) {
  Json j;
  j["schema"] = "pair-correlation v1";
  j["s"] = r.s;
  j["N"] = r.N;
  j["ordered_count"] = r.ordered_count;
  j["statistic"] = r.statistic;
  j["poissonian_value"] = 2.0 * r.s;
  return j;
}

Json to_json(const SecondMomentSeries& s) {
  Json j;
  j["schema"] = "second-moment v1";
  j["family"] = to_string(s.family);
  j["a"] = s.interval.a;
  j["b"] = s.interval.b;
  j["s"] = s.s;
  j["quadrature"] = {{"mode", mode_name(s.quad.mode)}, {"K", s.quad.nodes}, {"seed", s.quad.seed}};
  Json entries = Json::array();
  for (const auto& e : s.entries) entries.push_back({{"N", e.N}, {"V", e.V}, {"node_values", e.node_values}});
  j["entries"] = std::move(entries);
  j["fitted_exponent"] = s.fit ? Json(s.fit->exponent) : Json(nullptr);
  j["fitted_log_constant"] = s.fit ? Json(s.fit->log_constant) : Json(nullptr);
  return j;
}

std::string to_csv(const SecondMomentSeries& s) {
  std::ostringstream out;
  out << "N,V,K,mode,seed,s,a,b,family\n";
  for (const auto& e : s.entries) {
    out << e.N << ',' << format_double(e.V) << ',' << s.quad.nodes << ',' << mode_name(s.quad.mode)
        << ',' << s.quad.seed << ',' << format_double(s.s) << ',' << format_double(s.interval.a) << ','
        << format_double(s.interval.b) << ',' << to_string(s.family) << '\n';
  }
  return out.str();
}

}  // namespace ppc
