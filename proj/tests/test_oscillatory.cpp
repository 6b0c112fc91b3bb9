#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gl2lab/lfunc.hpp"
#include "gl2lab/numerics/compensated.hpp"
#include "gl2lab/numerics/quadrature.hpp"
#include "gl2lab/oscillatory.hpp"

using namespace gl2lab;

namespace {

cplx trapezoid(const std::function<cplx(double)>& f, double a, double b, long n) {
  CompensatedComplexSum s;
  double h = (b - a) / n;
  for (long i = 1; i < n; ++i) s.add(f(a + i * h));
  return s.value() * h + 0.5 * h * (f(a) + f(b));
}

TransformPhase grid_phase(double t, double qf, double mf, double nf, double yf, int sign) {
  double N = t * t, K = std::pow(t, 0.75), Q = std::sqrt(N / K);
  TransformPhase p{t, N, std::max(1L, static_cast<long>(std::floor(qf * Q))), 0, 0, 0, K, sign};
  p.m = mf * p.M0();
  p.n = nf * p.N0();
  p.y1 = yf * p.y1_limit();
  return p;
}

// Kernel phase used for the Cauchy-Poisson tests: q = floor(qf Q), n at a fraction of N0, y1 at its limit.
TransformPhase kernel_phase(double t, double qf, double nf) {
  double N = t * t, K = std::pow(t, 0.75), Q = std::sqrt(N / K);
  TransformPhase p{t, N, static_cast<long>(std::floor(qf * Q)), 0, 0, 0, K, -1};
  p.n = nf * p.N0();
  p.y1 = p.y1_limit();
  return p;
}

}  // namespace

TEST_CASE("certificate bound is 8M/sqrt(r)") {
  PhaseProfile p;
  p.f = [](double x) { return 2.0 * x * x; };
  p.fprime = [](double x) { return 4.0 * x; };
  p.fsecond = [](double) { return 4.0; };
  p.g = [](double) { return 1.0; };
  p.a = 0.0;
  p.b = 1.0;
  p.M = 1.0;
  p.r = 4.0;
  auto c = second_derivative_certificate(p);
  CHECK(c.bound == 4.0);
  CHECK(c.holds());
}

TEST_CASE("certificate for f = x^2 on [0, 1] against a dense trapezoid") {
  PhaseProfile p;
  p.f = [](double x) { return x * x; };
  p.fprime = [](double x) { return 2.0 * x; };
  p.fsecond = [](double) { return 2.0; };
  p.g = [](double) { return 1.0; };
  p.M = 1.0;
  p.r = 2.0;
  auto c = second_derivative_certificate(p);
  CHECK(c.bound == doctest::Approx(8.0 / std::sqrt(2.0)));
  auto oracle = trapezoid([](double x) { return e(x * x); }, 0.0, 1.0, 1000000);
  CHECK(std::fabs(c.measured - c.integral_error - std::abs(oracle)) <= 1e-8);
  CHECK(c.measured <= c.bound);
}

TEST_CASE("certificate preconditions are enforced") {
  PhaseProfile p;
  p.f = [](double x) { return x * x * x; };
  p.fprime = [](double x) { return 3.0 * x * x; };
  p.fsecond = [](double x) { return 6.0 * x; };
  p.g = [](double) { return 1.0; };
  p.a = -1.0;
  p.b = 1.0;
  p.r = 0.1;
  CHECK_THROWS_AS(second_derivative_certificate(p), CertificateError);

  PhaseProfile q;
  q.f = [](double x) { return x * x; };
  q.fprime = [](double x) { return 2.0 * x; };
  q.fsecond = [](double) { return 2.0; };
  q.g = [](double) { return 2.0; };
  q.M = 1.0;
  q.r = 2.0;
  CHECK_THROWS_AS(second_derivative_certificate(q), CertificateError);
  q.g = [](double) { return 1.0; };
  q.r = 3.0;
  CHECK_THROWS_AS(second_derivative_certificate(q), CertificateError);
}

TEST_CASE("200 randomized certificates are sound") {
  auto profiles = random_certified_profiles(200, 12345);
  REQUIRE(profiles.size() == 200);
  double worst = 0.0;
  for (const auto& p : profiles) {
    CHECK_NOTHROW(check_certificate_preconditions(p));
    auto c = second_derivative_certificate(p);
    CHECK(c.measured <= c.bound);
    worst = std::max(worst, c.measured / c.bound);
  }
  MESSAGE("worst measured/bound " << worst);
}

TEST_CASE("eval_I: trivial phase, decay and conjugation") {
  auto w = default_osc_weight();
  auto triv = eval_I(0.0, 1, 0.0, 0.0, 1e4, 10.0, w);
  CHECK(std::abs(triv.value - w.mass()) <= 1e-9);

  // Phase derivative sqrt(nN/x)/q far above nu and the u-scale.
  double N = 1e4, Q = 10.0, nu = 5.0, u = 0.5;
  long q = 3;
  double n = 1e4 * q * q * nu * nu / N;
  auto far = eval_I(n, q, nu, u, N, Q, w);
  CHECK(std::abs(far.value) <= 1e-6);

  auto z = eval_I(3.0, 2, 4.0, 0.7, N, Q, w, 1);
  auto zc = eval_I(3.0, 2, -4.0, -0.7, N, Q, w, -1);
  CHECK(std::abs(zc.value - std::conj(z.value)) <= 1e-9);

  auto oracle = trapezoid(
      [&](double x) {
        return w(x) * std::exp(cplx(0.0, -4.0 * std::log(x))) *
               e(N * 0.7 * x / (2 * Q) + 2.0 * std::sqrt(3.0 * N * x) / 2.0);
      },
      w.lo(), w.hi(), 400000);
  CHECK(std::abs(z.value - oracle) <= 1e-9);
}

TEST_CASE("P'' at y = 1 with y1 = 0 equals t/pi") {
  TransformPhase p = grid_phase(200.0, 0.5, 0.5, 0.5, 0.0, 1);
  CHECK(p.P2(1.0) == doctest::Approx(200.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(p.admissible());
  TransformPhase bad = p;
  bad.m = 2.0 * p.M0();
  CHECK_FALSE(bad.admissible());
}

TEST_CASE("curly I matches a dense trapezoid and reports stationary points") {
  auto w = default_osc_weight();
  auto p = grid_phase(100.0, 0.5, 0.25, 0.5, 1.0, -1);
  auto r = eval_curly_I(p, w);
  double qd = static_cast<double>(p.q);
  auto oracle = trapezoid(
      [&](double x) {
        return w(x) * std::exp(cplx(0.0, -p.t * std::log(x))) *
               e(2.0 * std::sqrt(p.m * p.N * x) / qd + p.sign * 2.0 * std::sqrt(p.n * p.N * (x + p.y1)) / qd);
      },
      w.lo(), w.hi(), 1000000);
  CHECK(std::abs(r.value - oracle) <= 1e-9);
  for (double y : r.stationary_points) CHECK(std::fabs(p.P1(y)) <= 1e-6 * p.t);
  auto m = stationary_m(p, 1.0);
  p.m = m;
  auto roots = phase_stationary_points(p, std::sqrt(w.lo()), std::sqrt(w.hi()));
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("curly I envelope and P'' floor on the t = 200 grid") {
  auto w = default_osc_weight();
  const double t = 200.0, env = 10.0 / std::sqrt(t), floor = t / (2.0 * std::numbers::pi);
  double worst = 0.0;
  for (double qf : {0.25, 0.5, 1.0})
    for (double mf : {0.01, 0.25, 1.0})
      for (double nf : {0.0, 0.5, 1.0})
        for (double yf : {-1.0, 1.0})
          for (int sg : {1, -1}) {
            auto p = grid_phase(t, qf, mf, nf, yf, sg);
            REQUIRE(p.admissible());
            auto r = eval_curly_I(p, w);
            double a = std::abs(r.value) + r.error_estimate;
            worst = std::max(worst, a / env);
            CHECK(a <= env);
            CHECK(r.min_abs_P2 >= floor);
          }
  MESSAGE("worst |I| / envelope " << worst);
}

TEST_CASE("curly I decays like t^{-1/2}") {
  auto w = default_osc_weight();
  std::vector<double> lt, lI;
  for (double t : {100.0, 200.0, 400.0}) {
    auto p = kernel_phase(t, 0.5, 0.25);
    p.m = stationary_m(p, 1.0);
    lt.push_back(std::log(t));
    lI.push_back(std::log(std::abs(curly_I_value(p, w))));
  }
  double slope = least_squares_slope(lt, lI);
  MESSAGE("slope " << slope);
  CHECK(slope <= -0.4);
}

TEST_CASE("u-integral: h-part saving of size qQ/10" * doctest::should_fail()) {
  DeltaScheme sc(100);
  std::vector<double> s;
  for (int i = 0; i <= 100; ++i) s.push_back(0.05 * i);
  bool all = true;
  for (int q = 1; q <= sc.q_max(); ++q) {
    auto r = u_integral_split(sc, q, sc.default_x_cutoff(), s);
    all = all && r.ratio() >= q * sc.Q() / 10.0;
  }
  CHECK(all);
}

TEST_CASE("Cauchy-Poisson kernel: diagonal, envelope and tail") {
  auto w = default_osc_weight();
  auto v = default_kernel_weight();
  const double t = 100.0;
  auto p = kernel_phase(t, 1.0, 0.25);
  const long d = 1;
  double M0 = stationary_m(p, 1.0) / 1.4;
  double kt = kernel_truncation(t, d, M0);
  CHECK(kt == doctest::Approx(10.0 * t * d / M0));
  CauchyPoissonKernel ker(p, p.n, p.n, d, M0, std::ceil(kt) + 5, w, v);
  cplx k0 = ker(0);
  CHECK(k0.real() >= 0.0);
  CHECK(std::fabs(k0.imag()) <= 1e-9);
  CHECK(std::abs(k0) <= 10.0 / t);
  for (double k : {1.0, 2.0, 5.0, std::max(1.0, std::floor(kt / 4))})
    CHECK(std::abs(ker(k)) <= 10.0 / t * std::sqrt(d / (k * M0)));
  for (double k : {std::ceil(kt), std::ceil(kt) + 5, -std::ceil(kt)}) CHECK(std::abs(ker(k)) <= 1e-6);
  CHECK(std::abs(kernel_I_k(3, p.n, p.n, p, d, M0, w, v) - ker(3)) <= 1e-12);
}

TEST_CASE("diagonal constraint") {
  auto w = default_osc_weight();
  auto v = default_kernel_weight();
  const double t = 100.0;
  auto p = kernel_phase(t, 1.0, 0.25);
  double M0 = stationary_m(p, 1.0) / 1.4;
  double thr = diagonal_threshold(p);
  double qd = static_cast<double>(p.q);
  CHECK(thr == doctest::Approx(10.0 * std::pow(t, 0.05) * qd * std::sqrt(p.N0()) / std::sqrt(p.N)));
  auto same = diagonal_constraint_check(p.n, p.n, p, M0, w, v);
  CHECK(same.ok);
  CHECK(same.kernel_abs <= 10.0 / t);
  auto far = diagonal_constraint_check(p.n, p.n + 100.0 * thr, p, M0, w, v);
  CHECK(far.ok);
  CHECK(far.kernel_abs <= 1e-6);
  for (double sep : {0.5, 1.0, 2.0, 4.0}) CHECK(diagonal_constraint_check(p.n, p.n + sep * thr, p, M0, w, v).ok);
}

TEST_CASE("decay onset of the diagonal kernel grows linearly in q") {
  auto w = default_osc_weight();
  auto v = default_kernel_weight();
  const double t = 200.0;
  std::vector<double> lq, lonset;
  for (double qf : {0.25, 0.5, 1.0}) {
    auto p = kernel_phase(t, qf, 0.75);
    double M0 = stationary_m(p, 1.0) / 1.4;
    auto small = [&](double sep) { return std::abs(CauchyPoissonKernel(p, p.n, p.n + sep, 1, M0, 0, w, v)(0)) < 1e-6; };
    double lo = 0.0, hi = 1.0;
    while (!small(hi)) {
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; it < 6; ++it) {
      double mid = 0.5 * (lo + hi);
      (small(mid) ? hi : lo) = mid;
    }
    lq.push_back(std::log(static_cast<double>(p.q)));
    lonset.push_back(std::log(hi));
  }
  double slope = least_squares_slope(lq, lonset);
  MESSAGE("onset slope in q " << slope);
  CHECK(slope >= 0.5);
  CHECK(slope <= 1.5);
}
