#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "gl2lab/arith.hpp"
#include "gl2lab/delta.hpp"
#include "gl2lab/lfunc.hpp"
#include "gl2lab/oscillatory.hpp"
#include "gl2lab/summation.hpp"

using namespace gl2lab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const CuspFormData& tau_table() {
  static const CuspFormData f = generate_delta_coefficients(300000);
  return f;
}

Outcome exact_arithmetic() {
  Outcome o;
  long ram = 0, ram_bad = 0;
  for (long q = 1; q <= 500; ++q) {
    auto row = ramanujan_sums(q, -500, 500);
    for (long m = -500; m <= 500; ++m, ++ram) {
      auto d = ramanujan_sum_direct(q, m);
      if (d != ramanujan_sum_formula(q, m) || d != row[m + 500]) ++ram_bad;
    }
  }
  auto f = generate_delta_coefficients(100000);
  long hecke = 0, hecke_bad = 0;
  for (std::uint64_t m = 1; m <= 10000; ++m)
    for (std::uint64_t n = m; m * n <= 10000; ++n, ++hecke)
      if (!hecke_relation_check(f, m, n)) ++hecke_bad;
  auto bad = deligne_violations(f, 100000);
  o.pass = ram_bad == 0 && hecke_bad == 0 && bad == 0;
  o.detail = "ramanujan=" + std::to_string(ram) + " ramanujan_fail=" + std::to_string(ram_bad) + " hecke=" + std::to_string(hecke) +
             " hecke_fail=" + std::to_string(hecke_bad) + " deligne_fail=" + std::to_string(bad);
  return o;
}

Outcome voronoi() {
  const double tol = 1e-6;
  auto V = default_voronoi_weight();
  CoefficientSource src[2] = {CoefficientSource::holomorphic(generate_delta_coefficients(5000)),
                              CoefficientSource::divisor(divisor_sequence(5000))};
  double worst = 0.0;
  long cases = 0;
  for (const auto& s : src)
    for (long q : {1, 2, 3, 5, 7})
      for (double X : {5.0, 20.0, 100.0}) {
        auto table = voronoi_kernels(s, V, q, X, voronoi_default_cutoff(s, V, q, X));
        for (long a = (q == 1 ? 0 : 1); a < q; ++a) {
          if (gcd64(a, q) != 1) continue;
          VoronoiCase c{s, a, q, X, V};
          auto lhs = voronoi_lhs(c);
          worst = std::max(worst, std::abs(lhs - voronoi_rhs(c, table).value) / std::abs(lhs));
          ++cases;
        }
      }
  return {worst <= tol, "cases=" + std::to_string(cases) + " worst_rel_gap=" + num(worst) + " tol=" + num(tol)};
}

Outcome poisson() {
  const double tol = 1e-8;
  auto W = default_poisson_weight();
  double worst = 0.0;
  for (long q = 1; q <= 8; ++q)
    for (double X : {10.0, 50.0, 200.0})
      for (long a = 0; a < q; ++a) {
        auto r = poisson_two_sided(PoissonCase{W, a, q, X, false});
        worst = std::max(worst, std::abs(r.lhs - r.rhs));
      }
  bool profile_ok = true;
  for (long q : {1L, 2L, 5L, 8L, 50L})
    for (double X : {1.0, 10.0, 50.0, 200.0}) {
      double thr = 10.0 * q / X * std::pow(q * X, 0.05);
      for (const auto& t : dual_truncation_profile(PoissonCase{W, 1 % q, q, X, false}))
        if (std::fabs(static_cast<double>(t.m)) >= thr && t.magnitude > 1e-8) profile_ok = false;
    }
  return {worst <= tol && profile_ok,
          "worst_abs_gap=" + num(worst) + " tol=" + num(tol) + " profile=" + (profile_ok ? "ok" : "violated")};
}

Outcome delta_symbol() {
  const double tol = 1e-2;
  std::vector<double> bands;
  double band50 = 0.0;
  for (int M : {25, 50, 100, 400}) {
    DeltaScheme s(M);
    std::vector<long> ns;
    long reach = M == 50 ? 100 : std::min(50L, 2L * M);
    for (long n = -reach; n <= reach; ++n) ns.push_back(n);
    auto v = delta_eval_many(ns, s);
    double band = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) band = std::max(band, std::fabs(v[i] - (ns[i] == 0 ? 1.0 : 0.0)));
    if (M == 50)
      band50 = band;
    else
      bands.push_back(band);
  }
  bool mono = bands[1] < bands[0] && bands[2] < bands[1];
  return {band50 <= tol && mono, "M50_band=" + num(band50) + " bands(25,100,400)=" + num(bands[0]) + "," +
                                     num(bands[1]) + "," + num(bands[2]) + (mono ? " monotone" : " not-monotone")};
}

Outcome circle_identity() {
  const double tol = 1e-3;
  const auto& f = tau_table();
  double worst = 0.0;
  for (auto [N, K, t] : {std::tuple{64L, 4.0, 10.0}, std::tuple{256L, 8.0, 25.0}})
    worst = std::max(worst, circle_method_identity(N, K, t, f.lambda, f.lambda).relative_gap);
  return {worst <= tol, "worst_rel_gap=" + num(worst) + " tol=" + num(tol)};
}

Outcome conductor() {
  const double N = 1e4, K = 1e2;
  auto k = make_conductor_kernel(N, K);
  const double mass = k.V.mass();
  double far_worst = 0.0, near_worst = INFINITY;
  for (long n = 10000; n <= 19000; n += 750)
    for (long sep : {-5000L, -2500L, -1000L, 1000L, 1500L, 2500L, 5000L, -10L, -5L, -1L, 0L, 1L, 5L, 10L}) {
      long m = n + sep;
      if (m < 10000 || m > 20000) continue;
      double v = std::abs(conductor_kernel_eval(m, n, k));
      if (std::labs(sep) >= 10.0 * N / K) far_worst = std::max(far_worst, v);
      if (std::labs(sep) <= N / (10.0 * K)) near_worst = std::min(near_worst, v / mass);
    }
  return {far_worst <= 1e-8 && near_worst >= 0.5,
          "far_max=" + num(far_worst) + " near_min_fraction=" + num(near_worst)};
}

Outcome certificates() {
  auto profiles = random_certified_profiles(200, 12345);
  long bad = 0;
  double worst = 0.0;
  for (const auto& p : profiles) {
    auto c = second_derivative_certificate(p);
    if (!c.holds()) ++bad;
    worst = std::max(worst, c.measured / c.bound);
  }
  return {bad == 0 && profiles.size() == 200,
          "profiles=" + std::to_string(profiles.size()) + " violations=" + std::to_string(bad) +
              " worst_ratio=" + num(worst)};
}

Outcome phase_analysis() {
  auto w = default_osc_weight();
  double worst_env = 0.0, worst_floor = INFINITY;
  std::vector<double> lt, lI;
  long cases = 0;
  for (double t : {100.0, 200.0, 400.0}) {
    double N = t * t, K = std::pow(t, 0.75), Q = std::sqrt(N / K);
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
              auto r = eval_curly_I(p, w);
              worst_env = std::max(worst_env, (std::abs(r.value) + r.error_estimate) * std::sqrt(t) / 10.0);
              worst_floor = std::min(worst_floor, r.min_abs_P2 / (t / (2.0 * std::numbers::pi)));
              ++cases;
            }
    }
    TransformPhase p{t, N, static_cast<long>(std::floor(0.5 * Q)), 0, 0, 0, K, -1};
    p.n = 0.25 * p.N0();
    p.y1 = p.y1_limit();
    p.m = stationary_m(p, 1.0);
    lt.push_back(std::log(t));
    lI.push_back(std::log(std::abs(curly_I_value(p, w))));
  }
  double slope = least_squares_slope(lt, lI);
  return {worst_env <= 1.0 && worst_floor >= 1.0 && slope <= -0.4,
          "cases=" + std::to_string(cases) + " max|I|/envelope=" + num(worst_env) +
              " min|P''|/floor=" + num(worst_floor) + " slope=" + num(slope)};
}

Outcome cauchy_poisson() {
  auto w = default_osc_weight();
  auto v = default_kernel_weight();
  double tail = 0.0, env = 0.0;
  bool diag = true, k0_ok = true;
  for (double t : {100.0, 200.0}) {
    double N = t * t, K = std::pow(t, 0.75), Q = std::sqrt(N / K);
    TransformPhase p{t, N, static_cast<long>(std::floor(Q)), 0, 0, 0, K, -1};
    p.n = 0.25 * p.N0();
    p.y1 = p.y1_limit();
    const long d = 1;
    double M0 = stationary_m(p, 1.0) / 1.4;
    double kt = kernel_truncation(t, d, M0);
    CauchyPoissonKernel ker(p, p.n, p.n, d, M0, std::ceil(kt) + 5, w, v);
    cplx k0 = ker(0);
    k0_ok = k0_ok && std::abs(k0) <= 10.0 / t && k0.real() >= 0.0 && std::fabs(k0.imag()) <= 1e-9;
    for (double k : {1.0, 2.0, 5.0, std::max(1.0, std::floor(kt / 4))})
      env = std::max(env, std::abs(ker(k)) / (10.0 / t * std::sqrt(d / (k * M0))));
    for (double k : {std::ceil(kt), std::ceil(kt) + 5, -std::ceil(kt)}) tail = std::max(tail, std::abs(ker(k)));
    double thr = diagonal_threshold(p);
    for (double sep : {0.0, 0.5, 1.0, 2.0, 4.0, 100.0})
      diag = diag && diagonal_constraint_check(p.n, p.n + sep * thr, p, M0, w, v).ok;
  }
  return {tail <= 1e-6 && env <= 1.0 && diag && k0_ok,
          "max_tail=" + num(tail) + " max|I_k|/envelope=" + num(env) + " diagonal=" + (diag ? "all-true" : "false") +
              " k0=" + (k0_ok ? "ok" : "bad")};
}

Outcome lvalue_lab() {
  RankinSelbergSeries s(CoefficientSource::holomorphic(tau_table()), CoefficientSource::holomorphic(tau_table()));
  auto gf = GammaFactorSpec::for_series(s);
  auto euler = euler_product_check(s, 2.0, static_cast<long>(s.n_max()), 1.0);
  double smooth = 0.0;
  for (double t : {50.0, 100.0}) smooth = std::max(smooth, central_value(t, s, gf).consistency_gap);
  auto scan = exponent_scan({50, 100, 200, 350, 500}, s, gf);
  double env = 0.0;
  for (const auto& r : scan.rows) env = std::max(env, r.sup_ratio / (10.0 * std::pow(r.t, 1.05)));
  return {euler.gap <= 1e-6 && smooth <= 1e-4 && env <= 1.0 && scan.slope < 1.0,
          "euler_gap=" + num(euler.gap) + " smoothing_gap=" + num(smooth) + " max_sup/envelope=" + num(env) +
              " slope=" + num(scan.slope)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exact arithmetic", 30, exact_arithmetic},
      {2, "Voronoi identity", 120, voronoi},
      {3, "Poisson identity", 60, poisson},
      {4, "delta symbol", 120, delta_symbol},
      {5, "circle-method identity", 180, circle_identity},
      {6, "conductor lowering", 30, conductor},
      {7, "oscillatory certificates", 60, certificates},
      {8, "phase analysis", 180, phase_analysis},
      {9, "Cauchy-Poisson kernels", 180, cauchy_poisson},
      {10, "L-value laboratory", 600, lvalue_lab},
  };
  bool all = true;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = secs < c.limit_s;
    bool pass = o.pass && in_time;
    all = all && pass;
    std::printf("%s criterion %d (%s): %s time=%.1fs limit=%.0fs%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.limit_s, in_time ? "" : " OVER-TIME");
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
