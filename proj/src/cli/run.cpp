#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gl2lab/cli.hpp"

namespace gl2lab::cli {

namespace {

std::string usage() {
  std::string u = "usage: gl2lab <subcommand> [--config PATH] [--out DIR] [--workers N] [--seed S]\n"
                  "              [--tol NAME=VALUE]... [--no-timing] [--t T] [--t-list a,b,..]\n"
                  "              [--n-max N] [--form-g delta|divisor] [--smoothing gaussian|dyadic]\n"
                  "subcommands:";
  for (const auto& s : subcommands()) u += " " + s;
  return u + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

nlohmann::json to_json(const SuiteResult& r) {
  nlohmann::json j{{"suite", r.suite},           {"cases", r.cases},     {"passes", r.passes},
                   {"failures", r.failures},     {"max_gap", r.max_gap}, {"wall_ms", r.wall_ms}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"GL(2) numerical laboratory"};
  app.allow_extras(false);
  std::string subcommand, config_path, out_dir, form_g, smoothing, t_list;
  int workers = 0;
  std::uint64_t seed = 0;
  long n_max = 0;
  double t = 0.0;
  std::vector<std::string> tols;
  bool no_timing = false;
  app.add_option("subcommand", subcommand, "suite to run")->required();
  auto* o_config = app.add_option("--config", config_path, "flat key = value config file");
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  auto* o_workers = app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  auto* o_seed = app.add_option("--seed", seed, "seed for randomized suites");
  app.add_option("--tol", tols, "tolerance override NAME=VALUE (repeatable)");
  app.add_flag("--no-timing", no_timing, "write zero timings so artifacts are byte-reproducible");
  auto* o_t = app.add_option("--t", t, "height for lvalue");
  auto* o_tlist = app.add_option("--t-list", t_list, "comma-separated heights for exponent-scan");
  auto* o_nmax = app.add_option("--n-max", n_max, "coefficient table length for lvalue and exponent-scan");
  auto* o_g = app.add_option("--form-g", form_g, "second form: delta or divisor");
  auto* o_sm = app.add_option("--smoothing", smoothing, "reported AFE smoothing: gaussian or dyadic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help() << usage();
    return kPass;
  } catch (const CLI::ParseError& e) {
    if (subcommand.empty() && argc > 1 && argv[1][0] != '-') subcommand = argv[1];
    if (!subcommand.empty() &&
        std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end()) {
      std::cerr << "unknown subcommand '" << subcommand << "'\n" << usage();
      return kUnknownSubcommand;
    }
    std::cerr << e.what() << '\n' << usage();
    return kConfigError;
  }
  if (std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end()) {
    std::cerr << "unknown subcommand '" << subcommand << "'\n" << usage();
    return kUnknownSubcommand;
  }

  RunConfig cfg;
  cfg.subcommand = subcommand;
  try {
    if (*o_config)
      for (const auto& [k, v] : parse_flat_config(read_file(config_path))) apply_setting(cfg, k, v);
    if (*o_out) apply_setting(cfg, "out", out_dir);
    if (*o_workers) apply_setting(cfg, "workers", std::to_string(workers));
    if (*o_seed) apply_setting(cfg, "seed", std::to_string(seed));
    if (*o_t) apply_setting(cfg, "t", fmt(t));
    if (*o_tlist) apply_setting(cfg, "t_list", t_list);
    if (*o_nmax) apply_setting(cfg, "n_max", std::to_string(n_max));
    if (*o_g) apply_setting(cfg, "form_g", form_g);
    if (*o_sm) apply_setting(cfg, "smoothing", smoothing);
    if (no_timing) cfg.timing = false;
    for (const auto& kv : tols) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--tol expects NAME=VALUE, got '" + kv + "'");
      apply_setting(cfg, "tol." + kv.substr(0, eq), kv.substr(eq + 1));
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec || !std::filesystem::is_directory(cfg.out)) {
    std::cerr << "cannot create output directory " << cfg.out << '\n';
    return kUnwritableOutput;
  }

  std::vector<std::string> suites;
  if (subcommand == "all")
    std::copy_if(subcommands().begin(), subcommands().end(), std::back_inserter(suites),
                 [](const std::string& s) { return s != "all"; });
  else
    suites.push_back(subcommand);

  std::vector<SuiteResult> results;
  try {
    for (const auto& s : suites) {
      results.push_back(run_suite(s, cfg));
      const auto& r = results.back();
      std::printf("%-16s %-4s cases=%ld passes=%ld failures=%ld max_gap=%s%s%s\n", r.suite.c_str(),
                  r.ok() ? "PASS" : "FAIL", r.cases, r.passes, r.failures, fmt(r.max_gap).c_str(),
                  r.note.empty() ? "" : "  ", r.note.c_str());
      std::fflush(stdout);
    }
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& r : results) summary.push_back(to_json(r));
    std::ofstream os(cfg.out / "summary.json");
    if (!os) throw OutputError("cannot write summary.json");
    os << summary.dump(2) << '\n';
    if (!os) throw OutputError("cannot write summary.json");
  } catch (const OutputError& e) {
    std::cerr << e.what() << '\n';
    return kUnwritableOutput;
  }

  bool ok = std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.ok(); });
  return ok ? kPass : kContractFailure;
}

}  // namespace gl2lab::cli
