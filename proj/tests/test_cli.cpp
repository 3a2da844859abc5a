#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "ppc/cli.hpp"

using namespace ppc;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "ppc_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void check_usage_error(const std::vector<std::string>& args) {
  const Run r = run(args);
  CAPTURE(r.err);
  CHECK(r.code == kExitUsage);
  CHECK(r.out.empty());
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  const auto j = nlohmann::json::parse(r.err);
  CHECK(j["error"] == "usage");
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("orbit writes a point file") {
  const Run r = run({"orbit", "--family", "monomial:k=2", "--alpha", "1.5", "--N", "3", "--delta", "1e-9"});
  CHECK(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# ppc-points v1 N=3");
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line[0] != '#') values.push_back(std::stod(line));
  }
  CHECK(values == std::vector<double>{0.5, 0.0625, 0.443359375});

  const Run zeros = run({"orbit", "--family", "linpow", "--alpha", "2.0", "--N", "5"});
  CHECK(zeros.code == kExitOk);
  CHECK(zeros.out.find("0.00000000000000000000000000000e+00\n0.0000") != std::string::npos);
}

TEST_CASE("precision refusal exits 2") {
  const Run r = run({"orbit", "--family", "factorial", "--alpha", "1.8", "--N", "25"});
  CHECK(r.code == kExitNumeric);
  CHECK(r.out.empty());
  const auto j = nlohmann::json::parse(r.err);
  CHECK(j["error"] == "precision");
}

TEST_CASE("paircorr from a file and from a family") {
  const auto path = scratch("three.txt");
  {
    std::ofstream f(path);
    f << "# ppc-points v1 N=3\n0.1\n0.15\n0.9\n";
  }
  Run r = run({"paircorr", "--in", path.string(), "--s", "0.3"});
  CHECK(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["statistic"].get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(j["ordered_count"] == 2);
  CHECK(j["config"]["in"] == path.string());

  {
    std::ofstream f(path);
    f << "# ppc-points v1 N=2\n0.0\n0.5\n";
  }
  r = run({"paircorr", "--in", path.string(), "--s", "0.5", "--N", "2"});
  CHECK(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out)["statistic"] == 0.0);

  r = run({"paircorr", "--family", "kronecker", "--alpha", "1.618033988749894848", "--s", "0.1", "--N", "5000"});
  CHECK(r.code == kExitOk);
  j = nlohmann::json::parse(r.out);
  CHECK(j["statistic"] == 0.0);
  CHECK(j["schema"] == "pair-correlation v1");

  r = run({"paircorr", "--family", "monomial:k=2", "--alpha", "1.8", "--s", "1", "--N-list", "50,100",
           "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("N,statistic\n50,", 0) == 0);
}

TEST_CASE("orbit output feeds paircorr") {
  const auto path = scratch("orbit.txt");
  Run r = run({"orbit", "--family", "monomial:k=2", "--alpha", "1.8", "--N", "300", "--out", path.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  const Run from_file = run({"paircorr", "--in", path.string(), "--s", "1"});
  const Run direct = run({"paircorr", "--family", "monomial:k=2", "--alpha", "1.8", "--N", "300", "--s", "1"});
  REQUIRE(from_file.code == kExitOk);
  REQUIRE(direct.code == kExitOk);
  CHECK(nlohmann::json::parse(from_file.out)["ordered_count"] == nlohmann::json::parse(direct.out)["ordered_count"]);
}

TEST_CASE("hypothesis reports") {
  Run r = run({"hypothesis", "--family", "monomial:k=2", "--a", "1.5", "--b", "2"});
  CHECK(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == "hypothesis-report v1");
  for (const auto& c : j["conditions"]) CHECK(c["status"] == "holds");
  CHECK(j["N1"].is_number_integer());

  r = run({"hypothesis", "--family", "linpow", "--a", "1.5", "--b", "2"});
  j = nlohmann::json::parse(r.out);
  CHECK(j["conditions"][4]["status"] == "fails");
  CHECK(j["conditions"][4]["witness"]["n2"].is_number_integer());

  r = run({"hypothesis", "--family", "kronecker", "--a", "1.5", "--b", "2"});
  j = nlohmann::json::parse(r.out);
  CHECK(j["conditions"][0]["status"] == "fails");
}

TEST_CASE("measure and second moment") {
  Run r = run({"measure", "--g", "power:d=2", "--a", "1.1", "--b", "1.2", "--c", "0", "--d", "0.25"});
  CHECK(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == "measure-result v1");
  CHECK(j["measure"].get<double>() == doctest::Approx(0.0180340).epsilon(1e-5));
  CHECK(j["intervals"].size() == 1);

  r = run({"measure", "--family", "monomial:k=2", "--n1", "1", "--n2", "2", "--a", "1.5", "--b", "1.6", "--c", "0.9",
           "--d", "0.1"});
  CHECK(r.code == kExitOk);

  r = run({"measure", "--g", "power:d=400", "--a", "1.1", "--b", "1.3", "--c", "0", "--d", "0.5"});
  CHECK(r.code == kExitNumeric);

  r = run({"second-moment", "--selftest"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "exponent -1.000\n");

  r = run({"second-moment", "--family", "monomial:k=2", "--a", "1.5", "--b", "1.6", "--s", "1", "--N-list",
           "40,80,160", "--K", "4", "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("N,V,K,mode,seed,s,a,b,family\n", 0) == 0);
}

TEST_CASE("validation failures exit 1 with one JSON line") {
  check_usage_error({});
  check_usage_error({"bogus"});
  check_usage_error({"orbit", "--family", "monomial:k=2", "--alpha", "1.5"});
  check_usage_error({"orbit", "--family", "cubic", "--alpha", "1.5", "--N", "5"});
  check_usage_error({"orbit", "--family", "monomial:k=2", "--alpha", "0.5", "--N", "5"});
  check_usage_error({"orbit", "--family", "monomial:k=2", "--alpha", "1.5", "--N", "1"});
  check_usage_error({"orbit", "--family", "monomial:k=2", "--alpha", "1.5", "--N", "5", "--delta", "0.3"});
  check_usage_error({"orbit", "--family", "monomial:k=2", "--alpha", "1.5", "--N", "5", "--delta", "0"});
  check_usage_error({"hypothesis", "--family", "monomial:k=2", "--a", "2", "--b", "1.5"});
  check_usage_error({"hypothesis", "--family", "monomial:k=2", "--a", "1", "--b", "1.5"});
  check_usage_error({"hypothesis", "--family", "monomial:k=2", "--a", "1.5"});
  check_usage_error({"paircorr", "--family", "linpow", "--alpha", "1.5", "--N", "10", "--s", "-1"});
  check_usage_error({"paircorr", "--family", "linpow", "--alpha", "1.5", "--N-list", "20,10", "--s", "1"});
  check_usage_error({"paircorr", "--family", "linpow", "--alpha", "1.5", "--N", "10"});
  check_usage_error({"paircorr", "--in", "/nonexistent/file", "--s", "1"});
  check_usage_error({"second-moment", "--family", "monomial:k=2", "--a", "1.5", "--b", "1.6", "--s", "1",
                     "--N-list", "10,20", "--format", "xml"});
  check_usage_error({"second-moment", "--family", "monomial:k=2", "--a", "1.5", "--b", "1.6", "--s", "1",
                     "--N-list", "10,20", "--mode", "sobol"});
  check_usage_error({"measure", "--g", "power:d=2", "--a", "1.1", "--b", "1.2", "--c", "0.3", "--d", "0.3"});
  check_usage_error({"measure", "--g", "cos", "--a", "1.1", "--b", "1.2", "--c", "0", "--d", "0.3"});
  check_usage_error({"orbit", "--family", "monomial:k=2", "--alpha", "1.5", "--N", "5", "--unknown"});
}

TEST_CASE("replay is byte identical across runs and thread counts") {
  const auto a = scratch("sm1.json"), b = scratch("sm8.json");
  const std::vector<std::string> base{"second-moment", "--family", "monomial:k=2", "--a", "1.5", "--b", "1.6",
                                      "--s", "1", "--N-list", "40,80", "--K", "8", "--mode", "random", "--seed", "5"};
  auto one = base, eight = base;
  one.insert(one.end(), {"--threads", "1", "--out", a.string()});
  eight.insert(eight.end(), {"--threads", "8", "--out", b.string()});
  REQUIRE(run(one).code == kExitOk);
  REQUIRE(run(eight).code == kExitOk);
  CHECK(slurp(a) == slurp(b));
  CHECK(nlohmann::json::parse(slurp(a))["config"]["seed"] == 5);
  CHECK_FALSE(nlohmann::json::parse(slurp(a))["config"].contains("threads"));
}

TEST_CASE("help and version are stable") {
  const Run v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out == "ppc 1.0.0\n");
  const std::filesystem::path dir = PPC_SNAPSHOT_DIR;
  for (const auto& [args, file] : std::vector<std::pair<std::vector<std::string>, std::string>>{
           {{"--help"}, "help.txt"}, {{"second-moment", "--help"}, "help_second_moment.txt"}}) {
    const Run h = run(args);
    CHECK(h.code == 0);
    CAPTURE(file);
    CHECK(h.out == slurp(dir / file));
  }
}

}
