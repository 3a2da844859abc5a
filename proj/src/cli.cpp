#include "ppc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "ppc/errors.hpp"
#include "ppc/families.hpp"
#include "ppc/hypothesis.hpp"
#include "ppc/measure.hpp"
#include "ppc/paircorr.hpp"
#include "ppc/parallel.hpp"
#include "ppc/report_json.hpp"
#include "ppc/secondmoment.hpp"

namespace ppc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string subcommand;
  std::string family;
  std::string alpha;
  unsigned alpha_bits = 128;
  std::string in_path;
  std::string out_path;
  std::string format = "json";
  std::string mode = "midpoint";
  std::string g;
  double a = kNaN, b = kNaN, s = kNaN;
  double delta = 1e-12;
  double tol = 1e-9;
  double c = kNaN, d = kNaN;
  double halfwidth = kNaN;
  std::uint64_t N = 0;
  std::vector<std::uint64_t> N_list;
  std::uint64_t seed = 0;
  std::uint64_t K = 32;
  std::uint64_t n1 = 0, n2 = 0, n = 0;
  std::uint64_t n_max = 0, grid = 0, n1_max = 0, n2_max = 0;
  unsigned threads = 0;
  bool selftest = false;
};

// Tracks which flags the user passed on the active subcommand.
struct Flags {
  CLI::App* app = nullptr;
  bool has(const std::string& name) const {
    const CLI::Option* opt = app->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  }
};

void add_shared(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--family", cfg.family, "monomial:k=<int> | geomsum:k=<int> | factorial | linpow | kronecker");
  sub->add_option("--alpha", cfg.alpha, "decimal alpha > 1, pinned to a dyadic rational");
  sub->add_option("--alpha-bits", cfg.alpha_bits, "fractional bits kept when parsing alpha")->capture_default_str();
  sub->add_option("--a", cfg.a, "left end of the alpha interval");
  sub->add_option("--b", cfg.b, "right end of the alpha interval");
  sub->add_option("--N", cfg.N, "number of sequence terms");
  sub->add_option("--N-list", cfg.N_list, "ascending comma-separated N values")->delimiter(',');
  sub->add_option("--s", cfg.s, "pair-correlation scale s > 0");
  sub->add_option("--delta", cfg.delta, "certified tolerance for fractional parts")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "SplitMix64 seed")->capture_default_str();
  sub->add_option("--K", cfg.K, "quadrature nodes")->capture_default_str();
  sub->add_option("--out", cfg.out_path, "output path (default: standard output)");
  sub->add_option("--format", cfg.format, "json | csv")->capture_default_str();
  sub->add_option("--threads", cfg.threads, "worker threads (default: available parallelism)");
}

void require(const Flags& f, const std::string& name) {
  if (!f.has(name)) throw UsageError(name + " is required");
}

void validate_common(const Flags& f, const RunConfig& cfg) {
  if (f.has("--a") || f.has("--b")) {
    require(f, "--a");
    require(f, "--b");
    if (!(1.0 < cfg.a && cfg.a < cfg.b && std::isfinite(cfg.b))) throw UsageError("need 1 < a < b");
  }
  if (f.has("--s") && !(cfg.s > 0.0 && std::isfinite(cfg.s))) throw UsageError("need s > 0");
  if (!(cfg.delta > 0.0 && cfg.delta < 0.25)) throw UsageError("need 0 < delta < 1/4");
  if (cfg.delta < kMinDelta) throw UsageError("delta below 2^-50 cannot be certified");
  if (f.has("--N") && cfg.N < 2) throw UsageError("need N >= 2");
  for (std::size_t i = 0; i < cfg.N_list.size(); ++i) {
    if (cfg.N_list[i] < 2) throw UsageError("need every N >= 2 in --N-list");
    if (i > 0 && cfg.N_list[i] <= cfg.N_list[i - 1]) throw UsageError("--N-list must be strictly ascending");
  }
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be json or csv");
  if (f.has("--K") && cfg.K < 2) throw UsageError("need K >= 2");
  if (cfg.alpha_bits < 8) throw UsageError("need --alpha-bits >= 8");
  if (f.has("--family")) {
    try {
      (void)parse_family(cfg.family);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (f.has("--alpha")) {
    try {
      (void)parse_alpha(cfg.alpha, cfg.alpha_bits);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
}

// The replay block: every flag that influences results, threads excluded.
Json config_json(const Flags& f, const RunConfig& cfg) {
  Json j;
  j["subcommand"] = cfg.subcommand;
  if (f.has("--family")) j["family"] = cfg.family;
  if (f.has("--alpha")) {
    j["alpha"] = cfg.alpha;
    j["alpha_bits"] = cfg.alpha_bits;
    j["alpha_dyadic"] = parse_alpha(cfg.alpha, cfg.alpha_bits).to_string();
  }
  if (f.has("--in")) j["in"] = cfg.in_path;
  if (f.has("--a")) j["a"] = cfg.a;
  if (f.has("--b")) j["b"] = cfg.b;
  if (f.has("--N")) j["N"] = cfg.N;
  if (!cfg.N_list.empty()) j["N_list"] = cfg.N_list;
  if (f.has("--s")) j["s"] = cfg.s;
  j["delta"] = cfg.delta;
  return j;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out_path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file " + cfg.out_path);
  file << text;
}

ExactReal alpha_of(const RunConfig& cfg) { return parse_alpha(cfg.alpha, cfg.alpha_bits); }

// Points from --in, or from --family/--alpha/--N.
std::vector<UnitPoint> input_points(const Flags& f, const RunConfig& cfg) {
  if (f.has("--in")) {
    std::ifstream in(cfg.in_path);
    if (!in) throw UsageError("cannot open " + cfg.in_path);
    try {
      return read_points(in);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  require(f, "--family");
  require(f, "--alpha");
  std::uint64_t N = cfg.N;
  if (!cfg.N_list.empty()) N = std::max(N, cfg.N_list.back());
  if (N == 0) throw UsageError("--N or --N-list is required");
  return orbit(parse_family(cfg.family), alpha_of(cfg), N, cfg.delta).points;
}

// ----------------------------------------------------------- subcommands

int cmd_orbit(const Flags& f, const RunConfig& cfg, std::ostream& out) {
  require(f, "--family");
  require(f, "--alpha");
  require(f, "--N");
  const Orbit o = orbit(parse_family(cfg.family), alpha_of(cfg), cfg.N, cfg.delta);
  std::ostringstream text;
  write_points(text, o.points, "delta=" + format_double(cfg.delta) + "\nconfig " + config_json(f, cfg).dump());
  emit(cfg, out, text.str());
  return kExitOk;
}

int cmd_paircorr(const Flags& f, const RunConfig& cfg, std::ostream& out) {
  require(f, "--s");
  const std::vector<UnitPoint> points = input_points(f, cfg);
  if (points.size() < 2) throw UsageError("need at least 2 points");
  std::vector<std::uint64_t> N_list = cfg.N_list;
  if (N_list.empty()) N_list.push_back(points.size());
  for (const auto N : N_list) {
    if (N > points.size()) throw UsageError("N exceeds the number of points");
  }
  const auto curve = ppc_curve(points, cfg.s, N_list);

  if (cfg.format == "csv") {
    std::ostringstream text;
    text << "N,statistic\n";
    for (const auto& [N, r] : curve) text << N << ',' << format_double(r) << '\n';
    emit(cfg, out, text.str());
    return kExitOk;
  }
  const PairCorrelationResult full = pair_count(std::span(points).first(N_list.back()), cfg.s);
  Json j = to_json(full);
  if (!cfg.N_list.empty()) {
    Json c = Json::array();
    for (const auto& [N, r] : curve) c.push_back({{"N", N}, {"statistic", r}});
    j["curve"] = std::move(c);
  }
  j["config"] = config_json(f, cfg);
  emit(cfg, out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_discrepancy(const Flags& f, const RunConfig& cfg, std::ostream& out) {
  const std::vector<UnitPoint> points = input_points(f, cfg);
  const DiscrepancyResult d = star_discrepancy(points);
  Json j;
  j["schema"] = "discrepancy v1";
  j["N"] = d.N;
  j["d_star"] = d.d_star;
  if (points.size() >= 2) {
    const auto gaps = gap_spectrum(points);
    j["min_gap"] = gaps.front();
    j["max_gap"] = gaps.back();
    j["distinct_gaps"] = distinct_values(gaps, 1e-12).size();
  }
  j["config"] = config_json(f, cfg);
  emit(cfg, out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_hypothesis(const Flags& f, const RunConfig& cfg, std::ostream& out) {
  require(f, "--family");
  require(f, "--a");
  const SequenceFamily family = parse_family(cfg.family);
  HypothesisBounds bounds = HypothesisBounds::defaults_for(family);
  if (f.has("--n-max")) bounds.n_max = cfg.n_max;
  if (f.has("--grid")) bounds.grid_size = cfg.grid;
  if (f.has("--n1-max")) bounds.n1_search_max = cfg.n1_max;
  if (f.has("--n2-max")) bounds.n2_verify_max = cfg.n2_max;
  if (bounds.n_max < 2 || bounds.grid_size < 3 || bounds.n1_search_max < 2 || bounds.n2_verify_max < 2) {
    throw UsageError("need n-max >= 2, grid >= 3, n1-max >= 2, n2-max >= 2");
  }
  Json j = to_json(check_hypotheses(family, IntervalSpec(cfg.a, cfg.b), bounds));
  j["config"] = config_json(f, cfg);
  emit(cfg, out, j.dump(2) + "\n");
  return kExitOk;
}

MonotoneFunction measure_function(const Flags& f, const RunConfig& cfg) {
  if (f.has("--g")) {
    constexpr std::string_view kPrefix = "power:d=";
    if (!std::string_view(cfg.g).starts_with(kPrefix)) throw UsageError("--g must be power:d=<int>");
    unsigned d = 0;
    try {
      std::size_t used = 0;
      d = static_cast<unsigned>(std::stoul(cfg.g.substr(kPrefix.size()), &used));
      if (used != cfg.g.size() - kPrefix.size() || d == 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw UsageError("--g must be power:d=<positive int>");
    }
    return power_function(d);
  }
  require(f, "--family");
  const SequenceFamily family = parse_family(cfg.family);
  if (f.has("--n")) return family_term(family, cfg.n);
  require(f, "--n1");
  require(f, "--n2");
  if (cfg.n1 == 0 || cfg.n2 <= cfg.n1) throw UsageError("need n2 > n1 >= 1");
  if (family.kind == FamilyKind::Kronecker) throw UsageError("kronecker differences are degenerate");
  return family_difference(family, cfg.n1, cfg.n2);
}

int cmd_measure(const Flags& f, const RunConfig& cfg, std::ostream& out) {
  require(f, "--a");
  if (!(cfg.tol > 0.0 && cfg.tol <= 1e-6)) throw UsageError("need 0 < tol <= 1e-6");
  const MonotoneFunction g = measure_function(f, cfg);
  const IntervalSpec interval(cfg.a, cfg.b);
  Json config = config_json(f, cfg);
  config["g"] = g.label;
  config["tol"] = cfg.tol;

  if (f.has("--halfwidth")) {
    if (!(cfg.halfwidth >= 0.0 && cfg.halfwidth <= 0.5)) throw UsageError("need 0 <= halfwidth <= 1/2");
    Json j;
    j["schema"] = "preimage-intervals v1";
    Json list = Json::array();
    for (const auto& p : preimage_intervals(g, interval, cfg.halfwidth, cfg.tol)) {
      list.push_back({{"M", p.M}, {"left", p.left}, {"right", p.right}});
    }
    j["intervals"] = std::move(list);
    config["halfwidth"] = cfg.halfwidth;
    j["config"] = std::move(config);
    emit(cfg, out, j.dump(2) + "\n");
    return kExitOk;
  }

  require(f, "--c");
  require(f, "--d");
  CircleInterval target = CircleInterval::arc(0.0, 1.0);
  try {
    target = CircleInterval::from_endpoints(cfg.c, cfg.d);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const MeasureResult r = level_set_measure(g, interval, target, cfg.tol);
  Json j = to_json(r, lemma_bounds_check(r, target));
  config["c"] = cfg.c;
  config["d"] = cfg.d;
  j["config"] = std::move(config);
  emit(cfg, out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_second_moment(const Flags& f, const RunConfig& cfg, std::ostream& out) {
  if (cfg.selftest) {
    std::vector<std::pair<std::uint64_t, double>> synthetic;
    for (const std::uint64_t N : {100u, 200u, 400u, 800u}) {
      synthetic.emplace_back(N, 1.0 / static_cast<double>(N));
    }
    const DecayFit fit = decay_fit(synthetic);
    char buf[64];
    std::snprintf(buf, sizeof buf, "exponent %.3f\n", fit.exponent == 0.0 ? 0.0 : fit.exponent);
    emit(cfg, out, buf);
    return kExitOk;
  }
  require(f, "--family");
  require(f, "--a");
  require(f, "--s");
  if (cfg.N_list.empty()) throw UsageError("--N-list is required");
  if (cfg.mode != "midpoint" && cfg.mode != "random") throw UsageError("--mode must be midpoint or random");

  QuadratureSpec quad;
  quad.mode = cfg.mode == "midpoint" ? QuadratureMode::Midpoint : QuadratureMode::Random;
  quad.nodes = cfg.K;
  quad.seed = cfg.seed;
  const unsigned threads = cfg.threads == 0 ? default_threads() : cfg.threads;
  const SecondMomentSeries series = second_moment_series(
      parse_family(cfg.family), IntervalSpec(cfg.a, cfg.b), cfg.s, cfg.N_list, quad, cfg.delta, threads);

  if (cfg.format == "csv") {
    emit(cfg, out, to_csv(series));
    return kExitOk;
  }
  Json j = to_json(series);
  Json config = config_json(f, cfg);
  config["K"] = cfg.K;
  config["mode"] = cfg.mode;
  config["seed"] = cfg.seed;
  j["config"] = std::move(config);
  emit(cfg, out, j.dump(2) + "\n");
  return kExitOk;
}

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

void report(std::ostream& err, const std::string& kind, const std::string& message,
            std::optional<std::uint64_t> index = std::nullopt) {
  Json j;
  j["error"] = kind;
  j["message"] = one_line(message);
  if (index) j["index"] = *index;
  err << j.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Pair correlations and equidistribution of polynomial sequences f_n(alpha) mod 1", "ppc"};
  app.set_version_flag("--version", std::string("ppc ") + kVersion);
  app.require_subcommand(1);

  auto* orbit_cmd = app.add_subcommand("orbit", "write the ppc-points v1 file of {f_n(alpha)}, n = 1..N");
  auto* paircorr_cmd = app.add_subcommand("paircorr", "pair-correlation statistic R2(s, N)");
  auto* discrepancy_cmd = app.add_subcommand("discrepancy", "star discrepancy and gap spectrum summary");
  auto* hypothesis_cmd = app.add_subcommand("hypothesis", "check the five growth and convexity conditions");
  auto* measure_cmd = app.add_subcommand("measure", "exact level-set measure of {alpha : {g(alpha)} in I}");
  auto* moment_cmd = app.add_subcommand("second-moment", "quadrature estimate of the second moment V(N)");

  for (auto* sub : {orbit_cmd, paircorr_cmd, discrepancy_cmd, hypothesis_cmd, measure_cmd, moment_cmd}) {
    add_shared(sub, cfg);
  }
  for (auto* sub : {paircorr_cmd, discrepancy_cmd}) {
    sub->add_option("--in", cfg.in_path, "read points from a ppc-points v1 file");
  }
  hypothesis_cmd->add_option("--n-max", cfg.n_max, "largest index for conditions (2)-(4)");
  hypothesis_cmd->add_option("--grid", cfg.grid, "grid points on [a,b]");
  hypothesis_cmd->add_option("--n1-max", cfg.n1_max, "largest N1 searched");
  hypothesis_cmd->add_option("--n2-max", cfg.n2_max, "largest n2 verified");
  measure_cmd->add_option("--g", cfg.g, "power:d=<int> (otherwise --family with --n or --n1/--n2)");
  measure_cmd->add_option("--n", cfg.n, "single term f_n");
  measure_cmd->add_option("--n1", cfg.n1, "difference f_n2 - f_n1");
  measure_cmd->add_option("--n2", cfg.n2, "difference f_n2 - f_n1");
  measure_cmd->add_option("--c", cfg.c, "target interval start (wrap when c > d)");
  measure_cmd->add_option("--d", cfg.d, "target interval end");
  measure_cmd->add_option("--tol", cfg.tol, "measure tolerance")->capture_default_str();
  measure_cmd->add_option("--halfwidth", cfg.halfwidth, "emit preimage intervals of [M-h, M+h]");
  moment_cmd->add_option("--mode", cfg.mode, "midpoint | random")->capture_default_str();
  moment_cmd->add_flag("--selftest", cfg.selftest, "fit synthetic V = 1/N and print the exponent");

  std::vector<const char*> argv{"ppc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report(err, "usage", e.what());
    return kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  cfg.subcommand = active->get_name();
  const Flags flags{active};
  try {
    validate_common(flags, cfg);
    if (active == orbit_cmd) return cmd_orbit(flags, cfg, out);
    if (active == paircorr_cmd) return cmd_paircorr(flags, cfg, out);
    if (active == discrepancy_cmd) return cmd_discrepancy(flags, cfg, out);
    if (active == hypothesis_cmd) return cmd_hypothesis(flags, cfg, out);
    if (active == measure_cmd) return cmd_measure(flags, cfg, out);
    return cmd_second_moment(flags, cfg, out);
  } catch (const UsageError& e) {
    report(err, "usage", e.what());
    return kExitUsage;
  } catch (const IndeterminateFrac& e) {
    report(err, "precision", e.what(), e.index());
    return kExitNumeric;
  } catch (const PrecisionBudgetExceeded& e) {
    report(err, "precision", e.what());
    return kExitNumeric;
  } catch (const TooBlurry& e) {
    report(err, "precision", e.what());
    return kExitNumeric;
  } catch (const LevelCapExceeded& e) {
    report(err, "numeric", e.what());
    return kExitNumeric;
  } catch (const NonMonotone& e) {
    report(err, "numeric", e.what());
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    report(err, "usage", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    report(err, "numeric", e.what());
    return kExitNumeric;
  }
}

}  // namespace ppc
