#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>

#include <json.hpp>

#include "gl2lab/arith.hpp"
#include "gl2lab/cli.hpp"
#include "gl2lab/delta.hpp"
#include "gl2lab/lfunc.hpp"
#include "gl2lab/oscillatory.hpp"
#include "gl2lab/parallel.hpp"
#include "gl2lab/summation.hpp"

namespace gl2lab::cli {

namespace {

class Csv {
 public:
  Csv(const std::filesystem::path& path, const std::string& header) : path_(path), os_(path) {
    if (!os_) throw OutputError("cannot write " + path.string());
    os_ << header << '\n';
  }
  template <class... Ts>
  void row(const Ts&... cols) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cols), first = false), ...);
    os_ << '\n';
  }
  void line(const std::string& s) { os_ << s << '\n'; }
  ~Csv() = default;
  void close() {
    os_.close();
    if (!os_) throw OutputError("cannot write " + path_.string());
  }

 private:
  static std::string cell(double x) { return fmt(x); }
  static std::string cell(long x) { return std::to_string(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(std::size_t x) { return std::to_string(x); }
  static std::string cell(bool x) { return x ? "1" : "0"; }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }

  std::filesystem::path path_;
  std::ofstream os_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw OutputError("cannot write " + path.string());
  os << j.dump(2) << '\n';
  if (!os) throw OutputError("cannot write " + path.string());
}

const CuspFormData& delta_table(long n_max) {
  static std::mutex mu;
  static std::map<long, CuspFormData> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n_max);
  if (it == cache.end()) it = cache.emplace(n_max, generate_delta_coefficients(static_cast<std::size_t>(n_max))).first;
  return it->second;
}

void tally(SuiteResult& r, bool pass, double gap = 0.0) {
  ++r.cases;
  if (pass)
    ++r.passes;
  else
    ++r.failures;
  if (std::isfinite(gap)) r.max_gap = std::max(r.max_gap, gap);
}

SuiteResult suite_coeffs(const RunConfig& cfg) {
  SuiteResult r;
  const long n_max = std::max(cfg.coeffs_n_max, 10000L);
  const auto& f = delta_table(n_max);
  {
    std::ofstream os(cfg.out / "coeffs.csv");
    if (!os) throw OutputError("cannot write coeffs.csv");
    write_coefficients_csv(os, f);
    if (!os) throw OutputError("cannot write coeffs.csv");
  }
  Csv checks(cfg.out / "coeffs_checks.csv", "check,cases,failures");

  long ram_cases = 0, ram_fail = 0;
  auto per_q = parallel_map<long>(500, cfg.workers, [](std::size_t i) {
    try {
      ramanujan_sums(static_cast<std::int64_t>(i + 1), -500, 500);
      return 0L;
    } catch (const std::logic_error&) {
      return 1L;
    }
  });
  for (long bad : per_q) {
    ram_cases += 1001;
    ram_fail += bad ? 1001 : 0;
    tally(r, bad == 0);
  }
  checks.row(std::string("ramanujan_sum"), ram_cases, ram_fail);

  const std::uint64_t mn_max = 10000;
  Sieve sv(mn_max);
  long hecke_cases = 0, hecke_fail = 0;
  for (std::uint64_t m = 1; m <= mn_max; ++m) {
    for (std::uint64_t n = 1; m * n <= mn_max; ++n) {
      bool coprime = gcd64(static_cast<std::int64_t>(m), static_cast<std::int64_t>(n)) == 1;
      bool prime_power = false;
      if (!coprime) {
        auto p = sv.spf[m];
        std::uint64_t mm = m, nn = n;
        while (mm % p == 0) mm /= p;
        while (nn % p == 0) nn /= p;
        prime_power = mm == 1 && nn == 1;
      }
      if (!coprime && !prime_power) continue;
      ++hecke_cases;
      if (!hecke_relation_check(f, m, n)) ++hecke_fail;
    }
  }
  checks.row(std::string("hecke_relation"), hecke_cases, hecke_fail);
  tally(r, hecke_fail == 0);

  const long deligne_n = std::min(n_max, 100000L);
  auto bad = static_cast<long>(deligne_violations(f, static_cast<std::size_t>(deligne_n)));
  checks.row(std::string("deligne_bound"), deligne_n, bad);
  tally(r, bad == 0);
  checks.close();
  return r;
}

SuiteResult suite_delta(const RunConfig& cfg) {
  SuiteResult r;
  const double tol = cfg.tolerance("delta_band");
  Csv out(cfg.out / "delta.csv", "M,n,value,target,error");
  std::vector<std::pair<int, double>> bands;
  for (int M : cfg.M_list) {
    DeltaScheme scheme(M);
    std::vector<long> ns;
    for (long n = 0; n <= std::min(100L, 2L * M); ++n) ns.push_back(n);
    auto vals = delta_eval_many(ns, scheme, 0.0, cfg.workers);
    double band = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      double target = ns[i] == 0 ? 1.0 : 0.0;
      double err = std::fabs(vals[i] - target);
      band = std::max(band, err);
      out.row(M, ns[i], vals[i], target, err);
    }
    bands.emplace_back(M, band);
    if (M == 50) tally(r, band <= tol, band);
  }
  std::sort(bands.begin(), bands.end());
  for (std::size_t i = 1; i < bands.size(); ++i) tally(r, bands[i].second < bands[i - 1].second);
  out.close();

  const double N = 1e4, K = 1e2;
  auto kernel = make_conductor_kernel(N, K);
  const double mass = kernel.V.mass();
  const double far = cfg.tolerance("conductor_far"), near = cfg.tolerance("conductor_near");
  Csv cond(cfg.out / "conductor.csv", "m,n,separation,abs_kernel,class,pass");
  for (double base : {1.0, 1.25, 1.5, 1.75}) {
    auto n = static_cast<long>(base * N);
    for (long sep : {0L, 1L, 5L, 10L, 1000L, 1500L, 2500L, 5000L}) {
      long m = n + sep;
      if (m > 2 * static_cast<long>(N)) continue;
      double v = std::abs(conductor_kernel_eval(m, n, kernel));
      bool is_far = static_cast<double>(sep) >= 10.0 * N / K;
      bool pass = is_far ? v <= far : v >= near * mass;
      cond.row(m, n, sep, v, std::string(is_far ? "far" : "near"), pass);
      tally(r, pass);
    }
  }
  cond.close();
  return r;
}

SuiteResult suite_circle(const RunConfig& cfg) {
  SuiteResult r;
  const double tol = cfg.tolerance("circle_gap");
  const auto& f = delta_table(1000);
  Csv out(cfg.out / "circle_identity.csv", "N,K,t,M,Q,direct_re,direct_im,reconstructed_re,reconstructed_im,gap");
  struct Case {
    long N;
    double K, t;
  };
  for (auto c : {Case{64, 4, 10}, Case{256, 8, 25}}) {
    CircleIdentityOptions opt;
    opt.workers = cfg.workers;
    auto res = circle_method_identity(c.N, c.K, c.t, f.lambda, f.lambda, opt);
    out.row(c.N, c.K, c.t, res.M, res.Q, res.direct.real(), res.direct.imag(), res.reconstructed.real(),
            res.reconstructed.imag(), res.relative_gap);
    tally(r, res.relative_gap <= tol, res.relative_gap);
  }
  out.close();
  return r;
}

SuiteResult suite_voronoi(const RunConfig& cfg) {
  SuiteResult r;
  const double tol = cfg.tolerance("voronoi_gap");
  const auto V = default_voronoi_weight();
  // Probe the cutoffs on a small table first, then size the real one.
  auto probe_d = CoefficientSource::divisor(divisor_sequence(16));
  auto probe_f = CoefficientSource::holomorphic(delta_table(16));
  long need = 16;
  for (long q : cfg.q_list)
    for (double X : cfg.X_list) {
      need = std::max({need, voronoi_default_cutoff(probe_f, V, q, X), voronoi_default_cutoff(probe_d, V, q, X),
                       static_cast<long>(std::ceil(X * V.hi())) + 1});
    }
  CoefficientSource sources[2] = {CoefficientSource::holomorphic(delta_table(std::max(need, 1000L))),
                                  CoefficientSource::divisor(divisor_sequence(static_cast<std::size_t>(need)))};
  const char* names[2] = {"delta", "divisor"};
  Csv out(cfg.out / "voronoi.csv",
          "form,q,a,X,lhs_re,lhs_im,rhs_re,rhs_im,main_term,gap,gap_without_main,cutoff,tail_bound");
  double best_without_main = 0.0;
  for (int s = 0; s < 2; ++s) {
    for (long q : cfg.q_list)
      for (double X : cfg.X_list) {
        long cut = voronoi_default_cutoff(sources[s], V, q, X);
        auto table = voronoi_kernels(sources[s], V, q, X, cut);
        for (long a = (q == 1 ? 0 : 1); a < q; ++a) {
          if (gcd64(a, q) != 1) continue;
          VoronoiCase c{sources[s], a, q, X, V};
          auto lhs = voronoi_lhs(c);
          auto rhs = voronoi_rhs(c, table);
          double gap = std::abs(lhs - rhs.value) / std::abs(lhs);
          double without = std::abs(lhs - (rhs.value - rhs.main_term)) / std::abs(lhs);
          if (s == 1) best_without_main = std::max(best_without_main, without);
          out.row(std::string(names[s]), q, a, X, lhs.real(), lhs.imag(), rhs.value.real(), rhs.value.imag(),
                  rhs.main_term.real(), gap, without, rhs.cutoff, rhs.tail_bound);
          tally(r, gap <= tol, gap);
        }
      }
  }
  tally(r, best_without_main >= 1e-2);
  out.close();
  return r;
}

SuiteResult suite_poisson(const RunConfig& cfg) {
  SuiteResult r;
  const double tol = cfg.tolerance("poisson_gap");
  const auto W = default_poisson_weight();
  Csv out(cfg.out / "poisson.csv", "q,a,X,lhs_re,lhs_im,rhs_re,rhs_im,gap,dual_terms");
  for (long q = 1; q <= 8; ++q)
    for (double X : {10.0, 50.0, 200.0})
      for (long a = 0; a < q; ++a) {
        PoissonCase c{W, a, q, X, false};
        auto res = poisson_two_sided(c);
        double gap = std::abs(res.lhs - res.rhs);
        out.row(q, a, X, res.lhs.real(), res.lhs.imag(), res.rhs.real(), res.rhs.imag(), gap, res.dual_terms);
        tally(r, gap <= tol, gap);
      }
  out.close();

  Csv prof(cfg.out / "poisson_profile.csv", "q,X,m,magnitude,congruent,threshold,pass");
  std::vector<std::pair<long, double>> cases{{1, 100.0}, {50, 1.0}};
  for (long q = 1; q <= 8; ++q)
    for (double X : {10.0, 50.0, 200.0}) cases.emplace_back(q, X);
  for (auto [q, X] : cases) {
    PoissonCase c{W, 1 % q, q, X, false};
    double thr = 10.0 * static_cast<double>(q) / X * std::pow(static_cast<double>(q) * X, 0.05);
    bool pass = true;
    for (const auto& term : dual_truncation_profile(c)) {
      bool ok = std::fabs(static_cast<double>(term.m)) < thr || term.magnitude <= 1e-8;
      pass = pass && ok;
      if (term.magnitude > 1e-8 || !ok) prof.row(q, X, term.m, term.magnitude, term.congruent, thr, ok);
    }
    tally(r, pass);
  }
  prof.close();
  return r;
}

SuiteResult suite_osc(const RunConfig& cfg) {
  SuiteResult r;
  {
    Csv out(cfg.out / "certificates.csv", "index,a,b,M,r,bound,measured,pass");
    auto profiles = random_certified_profiles(200, cfg.seed);
    auto certs = parallel_map<Certificate>(profiles.size(), cfg.workers,
                                           [&](std::size_t i) { return second_derivative_certificate(profiles[i]); });
    for (std::size_t i = 0; i < certs.size(); ++i) {
      const auto& p = profiles[i];
      out.row(i, p.a, p.b, p.M, p.r, certs[i].bound, certs[i].measured, certs[i].holds());
      tally(r, certs[i].holds(), certs[i].measured / certs[i].bound);
    }
    out.close();
  }

  const auto w = default_osc_weight();
  const auto v = default_kernel_weight();
  const double envelope = cfg.tolerance("osc_envelope");
  {
    Csv out(cfg.out / "phase.csv", "t,q,m,n,y1,sign,abs_I,envelope,min_abs_P2,P2_floor,pass");
    std::vector<double> lt, lI;
    for (double t : {100.0, 200.0, 400.0}) {
      double N = t * t, K = std::pow(t, 0.75), Q = std::sqrt(N / K);
      std::vector<TransformPhase> grid;
      for (double qf : {0.25, 0.5, 1.0}) {
        TransformPhase p{t, N, std::max(1L, static_cast<long>(std::floor(qf * Q))), 0, 0, 0, K, 1};
        for (double mf : {0.01, 0.05, 0.25, 0.5, 1.0})
          for (double nf : {0.0, 0.5, 1.0})
            for (double yf : {-1.0, 0.0, 1.0})
              for (int sg : {1, -1}) {
                p.m = mf * p.M0();
                p.n = nf * p.N0();
                p.y1 = yf * p.y1_limit();
                p.sign = sg;
                grid.push_back(p);
              }
      }
      auto res = parallel_map<CurlyIResult>(grid.size(), cfg.workers,
                                            [&](std::size_t i) { return eval_curly_I(grid[i], w); });
      double env = envelope / std::sqrt(t), floor = t / (2.0 * std::numbers::pi);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& p = grid[i];
        double a = std::abs(res[i].value) + res[i].error_estimate;
        bool pass = a <= env && res[i].min_abs_P2 >= floor;
        out.row(t, p.q, p.m, p.n, p.y1, p.sign, std::abs(res[i].value), env, res[i].min_abs_P2, floor, pass);
        tally(r, pass, a / env);
      }
      TransformPhase p{t, N, static_cast<long>(std::floor(0.5 * Q)), 0, 0, 0, K, -1};
      p.n = 0.25 * p.N0();
      p.y1 = p.y1_limit();
      p.m = stationary_m(p, 1.0);
      lt.push_back(std::log(t));
      lI.push_back(std::log(std::abs(curly_I_value(p, w))));
    }
    double slope = least_squares_slope(lt, lI);
    out.line("# slope_log_abs_I_vs_log_t," + fmt(slope));
    tally(r, slope <= cfg.tolerance("osc_slope"));
    out.close();
  }
  {
    Csv out(cfg.out / "kernels.csv", "t,q,d,M0,k,abs_kernel,bound,kind,pass");
    Csv diag(cfg.out / "diagonal.csv", "t,q,n1,n2,threshold,abs_kernel,ok");
    const double tail_tol = cfg.tolerance("kernel_tail");
    for (double t : {100.0, 200.0}) {
      double N = t * t, K = std::pow(t, 0.75), Q = std::sqrt(N / K);
      TransformPhase p{t, N, static_cast<long>(std::floor(Q)), 0, 0, 0, K, -1};
      p.n = 0.25 * p.N0();
      p.y1 = p.y1_limit();
      const long d = 1;
      double M0 = stationary_m(p, 1.0) / 1.4;
      double kt = kernel_truncation(t, d, M0);
      CauchyPoissonKernel ker(p, p.n, p.n, d, M0, std::ceil(kt) + 5, w, v, cfg.workers);
      cplx k0 = ker(0);
      bool k0_ok = std::abs(k0) <= envelope / t && k0.real() >= 0 && std::fabs(k0.imag()) <= 1e-9;
      out.row(t, p.q, d, M0, 0.0, std::abs(k0), envelope / t, std::string("diagonal"), k0_ok);
      tally(r, k0_ok);
      for (double k : {1.0, 2.0, 5.0, std::max(1.0, std::floor(kt / 4))}) {
        double a = std::abs(ker(k)), bound = envelope / t * std::sqrt(d / (k * M0));
        out.row(t, p.q, d, M0, k, a, bound, std::string("envelope"), a <= bound);
        tally(r, a <= bound, a / bound);
      }
      for (double k : {std::ceil(kt), std::ceil(kt) + 5}) {
        double a = std::abs(ker(k));
        out.row(t, p.q, d, M0, k, a, tail_tol, std::string("tail"), a <= tail_tol);
        tally(r, a <= tail_tol);
      }
      double thr = diagonal_threshold(p);
      for (double sep : {0.0, 0.5, 1.0, 2.0, 4.0, 100.0}) {
        auto dc = diagonal_constraint_check(p.n, p.n + sep * thr, p, M0, w, v, cfg.workers);
        diag.row(t, p.q, p.n, p.n + sep * thr, dc.threshold, dc.kernel_abs, dc.ok);
        tally(r, dc.ok);
      }
    }
    out.close();
    diag.close();
  }
  return r;
}

RankinSelbergSeries make_series(const RunConfig& cfg) {
  auto f = CoefficientSource::holomorphic(delta_table(cfg.n_max));
  auto g = cfg.form_g == "divisor" ? CoefficientSource::divisor(divisor_sequence(static_cast<std::size_t>(cfg.n_max)))
                                   : f;
  return RankinSelbergSeries(f, g);
}

SuiteResult suite_lvalue(const RunConfig& cfg) {
  SuiteResult r;
  auto series = make_series(cfg);
  auto gf = GammaFactorSpec::for_series(series);
  auto smoothing = cfg.smoothing == "dyadic" ? Smoothing::dyadic : Smoothing::gaussian;
  CentralValue cv;
  try {
    cv = central_value(cfg.t, series, gf, smoothing, cfg.workers);
  } catch (const CentralValueInstability& e) {
    cv = e.result();
    cv.value = smoothing == Smoothing::gaussian ? cv.gaussian : cv.dyadic;
    r.note = "smoothings disagree";
  }
  nlohmann::json j{{"t", cfg.t},
                   {"value_re", cv.value.real()},
                   {"value_im", cv.value.imag()},
                   {"abs", std::abs(cv.value)},
                   {"consistency_gap", cv.consistency_gap}};
  write_json(cfg.out / "lvalue.json", j);
  tally(r, cv.consistency_gap <= cfg.tolerance("smoothing_gap"), cv.consistency_gap);

  auto ec = euler_product_check(series, 2.0, static_cast<long>(series.n_max()), INFINITY);
  Csv out(cfg.out / "euler.csv", "s,P,dirichlet,euler,gap,raw_gap");
  out.row(2.0, static_cast<long>(series.n_max()), ec.dirichlet.real(), ec.euler.real(), ec.gap, ec.raw_gap);
  out.close();
  tally(r, ec.gap <= cfg.tolerance("euler_gap"), ec.gap);
  return r;
}

SuiteResult suite_scan(const RunConfig& cfg) {
  SuiteResult r;
  auto series = make_series(cfg);
  auto gf = GammaFactorSpec::for_series(series);
  auto scan = exponent_scan(cfg.t_list, series, gf, cfg.workers);
  Csv out(cfg.out / "exponent_scan.csv", "t,sup_ratio,abs_L,runtime_ms");
  const double env = cfg.tolerance("scan_envelope"), gap_tol = cfg.tolerance("smoothing_gap");
  for (const auto& row : scan.rows) {
    out.row(row.t, row.sup_ratio, row.abs_L, cfg.timing ? row.runtime_ms : 0.0);
    double bound = env * std::pow(row.t, 1.05);
    tally(r, row.sup_ratio <= bound && row.consistency_gap <= gap_tol, row.sup_ratio / bound);
  }
  out.line("# fit,slope=" + fmt(scan.slope));
  out.close();
  tally(r, scan.slope < cfg.tolerance("scan_slope"));
  return r;
}

}  // namespace

SuiteResult run_suite(const std::string& name, const RunConfig& cfg) {
  static const std::map<std::string, std::function<SuiteResult(const RunConfig&)>> table{
      {"coeffs", suite_coeffs},         {"delta-check", suite_delta},   {"circle-identity", suite_circle},
      {"voronoi-check", suite_voronoi}, {"poisson-check", suite_poisson}, {"osc-check", suite_osc},
      {"lvalue", suite_lvalue},         {"exponent-scan", suite_scan},
  };
  auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("run_suite: unknown suite " + name);
  auto start = std::chrono::steady_clock::now();
  SuiteResult r;
  try {
    r = it->second(cfg);
  } catch (const OutputError&) {
    throw;
  } catch (const std::exception& e) {
    r.note = e.what();
    ++r.cases;
    ++r.failures;
  }
  r.suite = name;
  r.wall_ms =
      cfg.timing ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count() : 0.0;
  return r;
}

}  // namespace gl2lab::cli
