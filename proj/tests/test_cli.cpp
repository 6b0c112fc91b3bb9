#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <set>
#include <sstream>

#include "gl2lab/cli.hpp"

using namespace gl2lab::cli;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "gl2lab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("gl2lab_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
  return out;
}

}  // namespace

TEST_CASE("flat config parsing") {
  auto kv = parse_flat_config("# comment\nworkers = 3\n  t_list=50, 100 # trailing\n\ntol.euler_gap = 2e-6\n");
  CHECK(kv.size() == 3);
  CHECK(kv["workers"] == "3");
  CHECK(kv["t_list"] == "50, 100");
  RunConfig cfg;
  for (const auto& [k, v] : kv) apply_setting(cfg, k, v);
  CHECK(cfg.workers == 3);
  CHECK(cfg.t_list == std::vector<double>{50.0, 100.0});
  CHECK(cfg.tolerance("euler_gap") == 2e-6);
  CHECK(cfg.tolerance("poisson_gap") == 1e-8);
  CHECK_THROWS_AS(parse_flat_config("no equals sign"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "bogus", "1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "tol.bogus", "1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "workers", "0"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "n_max", "12x"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "form_g", "maass"), ConfigError);
}

TEST_CASE("default tolerances match the module contracts") {
  const auto& t = default_tolerances();
  CHECK(t.at("voronoi_gap") == 1e-6);
  CHECK(t.at("poisson_gap") == 1e-8);
  CHECK(t.at("delta_band") == 1e-2);
  CHECK(t.at("circle_gap") == 1e-3);
  CHECK(t.at("conductor_far") == 1e-8);
  CHECK(t.at("euler_gap") == 1e-6);
  CHECK(t.at("smoothing_gap") == 1e-4);
  CHECK(t.at("kernel_tail") == 1e-6);
}

TEST_CASE("every suite has exactly one subcommand") {
  const auto& s = subcommands();
  CHECK(s.size() == 9);
  std::set<std::string> uniq(s.begin(), s.end());
  CHECK(uniq.size() == s.size());
  CHECK(uniq.count("all") == 1);
}

TEST_CASE("fmt round-trips") {
  for (double x : {0.1, 1e-300, 3.0, -2.5e17, 1.0 / 3.0}) CHECK(std::stod(fmt(x)) == x);
}

TEST_CASE("exit codes") {
  auto out = scratch("codes");
  CHECK(run({"frobnicate", "--out", out.string()}) == kUnknownSubcommand);
  CHECK(run({"frobnicate"}) == kUnknownSubcommand);
  CHECK(run({"coeffs", "--out", "/proc/gl2lab_nope"}) == kUnwritableOutput);
  CHECK(run({"coeffs", "--tol", "nonsense=1", "--out", out.string()}) == kConfigError);
  CHECK(run({"coeffs", "--tol", "missing-equals", "--out", out.string()}) == kConfigError);
  CHECK(run({"coeffs", "--config", (out / "absent.cfg").string()}) == kConfigError);
  CHECK(run({"coeffs", "--workers", "0"}) == kConfigError);

  fs::create_directories(out);
  std::ofstream(out / "bad.cfg") << "unknown_key = 3\n";
  CHECK(run({"coeffs", "--config", (out / "bad.cfg").string(), "--out", out.string()}) == kConfigError);
}

TEST_CASE("lvalue writes JSON and fails on an impossible tolerance") {
  auto out = scratch("lvalue");
  REQUIRE(run({"lvalue", "--out", out.string(), "--n-max", "20000", "--t", "50"}) == kPass);
  auto j = nlohmann::json::parse(slurp(out / "lvalue.json"));
  CHECK(j["t"] == 50.0);
  CHECK(j["consistency_gap"].get<double>() <= 1e-4);
  CHECK(std::hypot(j["value_re"].get<double>(), j["value_im"].get<double>()) ==
        doctest::Approx(j["abs"].get<double>()));
  auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  REQUIRE(summary.is_array());
  CHECK(summary[0]["suite"] == "lvalue");
  CHECK(summary[0]["failures"] == 0);

  CHECK(run({"lvalue", "--out", out.string(), "--n-max", "20000", "--tol", "euler_gap=1e-30"}) == kContractFailure);
}

TEST_CASE("config file is applied before flags") {
  auto out = scratch("precedence");
  fs::create_directories(out);
  std::ofstream(out / "run.cfg") << "t = 100\nn_max = 20000\nout = " << (out / "ignored").string() << "\n";
  REQUIRE(run({"lvalue", "--config", (out / "run.cfg").string(), "--out", out.string(), "--t", "50"}) == kPass);
  auto j = nlohmann::json::parse(slurp(out / "lvalue.json"));
  CHECK(j["t"] == 50.0);
  CHECK_FALSE(fs::exists(out / "ignored"));
}

TEST_CASE("artifacts are byte-identical across worker counts") {
  auto a = scratch("det1"), b = scratch("det3");
  for (const char* suite : {"delta-check", "poisson-check", "exponent-scan"}) {
    int ra = run({suite, "--out", a.string(), "--workers", "1", "--no-timing", "--n-max", "40000", "--t-list", "50,100"});
    int rb = run({suite, "--out", b.string(), "--workers", "3", "--no-timing", "--n-max", "40000", "--t-list", "50,100"});
    CHECK(ra == rb);
    CHECK((ra == kPass || ra == kContractFailure));
  }
  auto ta = tree(a), tb = tree(b);
  CHECK(ta.size() >= 5);
  CHECK(ta == tb);
}

TEST_CASE("all with defaults passes") {
  auto out = scratch("all");
  CHECK(run({"all", "--out", out.string()}) == kPass);
  auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(summary.size() == subcommands().size() - 1);
  for (const auto& s : summary) {
    CAPTURE(s.dump());
    CHECK(s["failures"] == 0);
    CHECK(s["cases"].get<long>() > 0);
  }
  for (const char* f : {"coeffs.csv", "delta.csv", "conductor.csv", "circle_identity.csv", "voronoi.csv",
                        "poisson.csv", "certificates.csv", "phase.csv", "kernels.csv", "diagonal.csv", "lvalue.json",
                        "euler.csv", "exponent_scan.csv"})
    CHECK(fs::exists(out / f));
}
