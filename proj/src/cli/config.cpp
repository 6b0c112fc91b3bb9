#include <algorithm>
#include <charconv>
#include <sstream>

#include "gl2lab/cli.hpp"

namespace gl2lab::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto v = trim(value);
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty())
    throw ConfigError("config: bad numeric value for '" + key + "': '" + value + "'");
  return out;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(key, item));
  if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  auto v = trim(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: bad boolean for '" + key + "': '" + value + "'");
}

std::string parse_choice(const std::string& key, const std::string& value, std::initializer_list<const char*> allowed) {
  auto v = trim(value);
  for (auto* a : allowed)
    if (v == a) return v;
  throw ConfigError("config: bad choice for '" + key + "': '" + value + "'");
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"coeffs",       "delta-check",   "circle-identity",
                                              "voronoi-check", "poisson-check", "osc-check",
                                              "lvalue",       "exponent-scan", "all"};
  return names;
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tol{
      {"voronoi_gap", 1e-6},   {"poisson_gap", 1e-8},    {"delta_band", 1e-2},    {"circle_gap", 1e-3},
      {"conductor_far", 1e-8}, {"conductor_near", 0.5},  {"osc_envelope", 10.0},  {"osc_slope", -0.4},
      {"kernel_tail", 1e-6},   {"euler_gap", 1e-6},      {"smoothing_gap", 1e-4}, {"scan_envelope", 10.0},
      {"scan_slope", 1.0},
  };
  return tol;
}

double RunConfig::tolerance(const std::string& name) const {
  if (auto it = tol.find(name); it != tol.end()) return it->second;
  return default_tolerances().at(name);
}

std::map<std::string, std::string> parse_flat_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not of the form key = value");
    auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config: empty key on line " + std::to_string(lineno));
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key.rfind("tol.", 0) == 0) {
    auto name = key.substr(4);
    if (!default_tolerances().count(name)) throw ConfigError("config: unknown tolerance '" + name + "'");
    cfg.tol[name] = parse_number<double>(key, value);
  } else if (key == "out") {
    cfg.out = trim(value);
  } else if (key == "workers") {
    cfg.workers = parse_number<int>(key, value);
    if (cfg.workers < 1) throw ConfigError("config: workers must be >= 1");
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "timing") {
    cfg.timing = parse_bool(key, value);
  } else if (key == "t_list") {
    cfg.t_list = parse_list<double>(key, value);
  } else if (key == "q_list") {
    cfg.q_list = parse_list<long>(key, value);
  } else if (key == "X_list") {
    cfg.X_list = parse_list<double>(key, value);
  } else if (key == "M_list") {
    cfg.M_list = parse_list<int>(key, value);
  } else if (key == "n_max") {
    cfg.n_max = parse_number<long>(key, value);
  } else if (key == "coeffs_n_max") {
    cfg.coeffs_n_max = parse_number<long>(key, value);
  } else if (key == "t") {
    cfg.t = parse_number<double>(key, value);
  } else if (key == "form_f") {
    cfg.form_f = parse_choice(key, value, {"delta"});
  } else if (key == "form_g") {
    cfg.form_g = parse_choice(key, value, {"delta", "divisor"});
  } else if (key == "smoothing") {
    cfg.smoothing = parse_choice(key, value, {"gaussian", "dyadic"});
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

std::string fmt(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

}  // namespace gl2lab::cli
