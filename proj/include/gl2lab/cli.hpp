#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gl2lab::cli {

enum ExitCode : int {
  kPass = 0,
  kContractFailure = 1,
  kUnknownSubcommand = 2,
  kUnwritableOutput = 3,
  kConfigError = 4,
};

const std::vector<std::string>& subcommands();

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::filesystem::path out = "out";
  int workers = 1;
  std::uint64_t seed = 12345;
  bool timing = true;
  std::map<std::string, double> tol;

  std::vector<double> t_list{50, 100, 200, 350, 500};
  std::vector<long> q_list{1, 2, 3, 5, 7};
  std::vector<double> X_list{5, 20, 100};
  std::vector<int> M_list{25, 50, 100, 400};
  long n_max = 300000;
  long coeffs_n_max = 100000;

  double t = 50.0;
  std::string form_f = "delta";
  std::string form_g = "delta";
  std::string smoothing = "gaussian";

  double tolerance(const std::string& name) const;
};

// Named tolerances and their defaults.
const std::map<std::string, double>& default_tolerances();

// Flat "key = value" lines; '#' starts a comment. Throws ConfigError.
std::map<std::string, std::string> parse_flat_config(const std::string& text);
// Applies one key; tolerances are "tol.NAME". Throws ConfigError.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

struct SuiteResult {
  std::string suite;
  long cases = 0;
  long passes = 0;
  long failures = 0;
  double max_gap = 0.0;
  double wall_ms = 0.0;
  std::string note;
  bool ok() const { return failures == 0 && cases > 0; }
};

// Runs the suite behind one subcommand (not "all"), writing its artifacts
// under cfg.out. Throws OutputError when a file cannot be written.
SuiteResult run_suite(const std::string& name, const RunConfig& cfg);

// Shortest representation that reads back to the same double.
std::string fmt(double x);

int cli_main(int argc, char** argv);

}  // namespace gl2lab::cli
