#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <map>
#include <numbers>

#include "gl2lab/arith.hpp"
#include "gl2lab/numerics/compensated.hpp"
#include "gl2lab/numerics/quadrature.hpp"
#include "gl2lab/summation.hpp"

using namespace gl2lab;

namespace {

const CoefficientSource& tau_source() {
  static const CoefficientSource s = CoefficientSource::holomorphic(generate_delta_coefficients(5000));
  return s;
}

const CoefficientSource& divisor_source() {
  static const CoefficientSource s = CoefficientSource::divisor(divisor_sequence(5000));
  return s;
}

cplx lhs_oracle(const CoefficientSource& src, long a, long q, double X, const SmoothBump& V) {
  CompensatedComplexSum s;
  for (long n = 1; n <= static_cast<long>(src.n_max()); ++n) {
    double v = V(n / X);
    if (v != 0.0) s.add((*src.values)[n] * v * e(static_cast<double>(n * a % q) / q));
  }
  return s.value();
}

// 2 pi i^12 int V(y) J_11(4 pi sqrt(zy)) dy with Boost's Bessel function.
cplx holomorphic_kernel_oracle(const SmoothBump& V, double z) {
  double v = gauss_legendre_integrate(
      [&](double y) { return V(y) * boost::math::cyl_bessel_j(11, 4.0 * std::numbers::pi * std::sqrt(z * y)); },
      V.lo(), V.hi(), 2000);
  return 2.0 * std::numbers::pi * v;
}

// X sum_{m = -a mod q} W-hat(mX/q), with W-hat by composite Gauss-Legendre.
cplx poisson_rhs_oracle(const SmoothBump& W, long a, long q, double X) {
  auto what = [&](double xi) {
    double re = gauss_legendre_integrate([&](double x) { return W(x) * std::cos(2 * std::numbers::pi * x * xi); },
                                         W.lo(), W.hi(), 400);
    double im = gauss_legendre_integrate([&](double x) { return -W(x) * std::sin(2 * std::numbers::pi * x * xi); },
                                         W.lo(), W.hi(), 400);
    return cplx(re, im);
  };
  CompensatedComplexSum s;
  long r = ((-a) % q + q) % q;
  for (long m = r - 40 * q; m <= 40 * q; m += q) {
    auto v = what(m * X / q);
    s.add(v);
  }
  return X * s.value();
}

double voronoi_gap(const CoefficientSource& src, long a, long q, double X) {
  VoronoiCase c{src, a, q, X, default_voronoi_weight()};
  auto lhs = voronoi_lhs(c);
  auto rhs = voronoi_rhs(c, voronoi_default_cutoff(src, c.V, q, X));
  return std::abs(lhs - rhs.value) / std::abs(lhs);
}

}  // namespace

TEST_CASE("voronoi_lhs: direct sums") {
  auto V = default_voronoi_weight();
  VoronoiCase c{tau_source(), 0, 1, 10.0, V};
  CHECK(std::abs(voronoi_lhs(c) - lhs_oracle(tau_source(), 0, 1, 10.0, V)) <= 1e-14);
  VoronoiCase empty{tau_source(), 0, 1, 0.3, V};
  CHECK(voronoi_lhs(empty) == cplx(0.0, 0.0));
  VoronoiCase d{divisor_source(), 0, 1, 10.0, V};
  CHECK(voronoi_lhs(d).imag() == 0.0);
  CHECK(voronoi_lhs(d).real() > 0.0);
  VoronoiCase big{tau_source(), 0, 1, 4000.0, V};
  CHECK_THROWS(voronoi_lhs(big));
}

TEST_CASE("holomorphic kernel matches an independent Bessel oracle") {
  auto V = default_voronoi_weight();
  for (double z : {0.01, 0.3, 1.0, 4.0, 25.0}) {
    auto k = voronoi_kernel_plus(tau_source(), V, z);
    auto o = holomorphic_kernel_oracle(V, z);
    CHECK(std::abs(k - o) <= 1e-10 * std::max(1.0, std::abs(o)));
    CHECK(voronoi_kernel_minus(tau_source(), V, z) == cplx(0.0, 0.0));
  }
}

TEST_CASE("voronoi examples") {
  auto V = default_voronoi_weight();
  VoronoiCase c{tau_source(), 0, 1, 10.0, V};
  auto rhs = voronoi_rhs(c, voronoi_default_cutoff(tau_source(), V, 1, 10.0));
  CHECK(rhs.dual_minus == cplx(0.0, 0.0));
  CHECK(rhs.main_term == cplx(0.0, 0.0));
  CHECK(voronoi_gap(tau_source(), 0, 1, 10.0) <= 1e-6);
  CHECK(voronoi_gap(divisor_source(), 1, 2, 20.0) <= 1e-6);
}

TEST_CASE("voronoi two-sided grid for both coefficient families") {
  double worst = 0.0;
  for (const auto* src : {&tau_source(), &divisor_source()})
    for (long q : {1, 2, 3, 5, 7})
      for (double X : {5.0, 20.0, 100.0})
        for (long a = (q == 1 ? 0 : 1); a < q; ++a) {
          if (gcd64(a, q) != 1) continue;
          double g = voronoi_gap(*src, a, q, X);
          worst = std::max(worst, g);
          CAPTURE(q);
          CAPTURE(a);
          CAPTURE(X);
          CHECK(g <= 1e-6);
        }
  MESSAGE("worst voronoi gap " << worst);
}

TEST_CASE("divisor main term is needed") {
  auto V = default_voronoi_weight();
  double best = 0.0;
  for (long q : {1, 2, 3, 5, 7})
    for (double X : {5.0, 20.0, 100.0}) {
      VoronoiCase c{divisor_source(), 1 % q, q, X, V};
      auto lhs = voronoi_lhs(c);
      auto rhs = voronoi_rhs(c, voronoi_default_cutoff(divisor_source(), V, q, X));
      best = std::max(best, std::abs(lhs - (rhs.value - rhs.main_term)) / std::abs(lhs));
    }
  CHECK(best >= 1e-2);
}

TEST_CASE("voronoi truncation is signalled when the kernels have not decayed") {
  VoronoiCase c{tau_source(), 1, 7, 5.0, default_voronoi_weight()};
  CHECK_THROWS_AS(voronoi_rhs(c, 2), VoronoiTruncationError);
  try {
    voronoi_rhs(c, 2);
  } catch (const VoronoiTruncationError& e) {
    CHECK(e.achieved_bound() > 1e-10);
  }
}

TEST_CASE("poisson: classical case and W-hat(0) = int W") {
  auto W = default_poisson_weight();
  PoissonCase c{W, 0, 1, 10.0, false};
  auto r = poisson_two_sided(c);
  CHECK(std::abs(r.lhs - r.rhs) <= 1e-8);
  CHECK(std::abs(poisson_fourier(c, 0.0) - W.mass()) <= 1e-12);
  PoissonCase d{W, 0, 1, 10.0, true};
  CHECK(std::abs(poisson_fourier(d, 0.0)) <= 1e-10);
}

TEST_CASE("poisson q = 3, a = 1, X = 50 against an independent dual sum") {
  auto W = default_poisson_weight();
  PoissonCase c{W, 1, 3, 50.0, false};
  auto r = poisson_two_sided(c);
  CHECK(std::abs(r.lhs - r.rhs) <= 1e-8);
  CHECK(std::abs(r.rhs - poisson_rhs_oracle(W, 1, 3, 50.0)) <= 1e-8);
  CHECK(std::abs(r.lhs - poisson_rhs_oracle(W, 1, 3, 50.0)) <= 1e-8);
}

TEST_CASE("poisson grid q <= 8, X in {10, 50, 200}") {
  auto W = default_poisson_weight();
  double worst = 0.0;
  for (long q = 1; q <= 8; ++q)
    for (double X : {10.0, 50.0, 200.0})
      for (long a = 0; a < q; ++a)
        for (bool deriv : {false, true}) {
          auto r = poisson_two_sided(PoissonCase{W, a, q, X, deriv});
          worst = std::max(worst, std::abs(r.lhs - r.rhs));
        }
  MESSAGE("worst poisson gap " << worst);
  CHECK(worst <= 1e-8);
}

TEST_CASE("dual truncation profile") {
  auto W = default_poisson_weight();
  auto survivors = [&](long q, double X) {
    long n = 0;
    for (const auto& t : dual_truncation_profile(PoissonCase{W, 1 % q, q, X, false}))
      if (t.magnitude > 1e-8) ++n;
    return n;
  };
  auto p = dual_truncation_profile(PoissonCase{W, 0, 1, 100.0, false});
  for (const auto& t : p)
    if (t.m != 0) CHECK(t.magnitude <= 1e-8);
  CHECK(survivors(1, 100.0) == 1);

  long s50 = survivors(50, 1.0), s25 = survivors(25, 1.0);
  MESSAGE("survivors q=50: " << s50 << ", q=25: " << s25);
  CHECK(static_cast<double>(s50) / s25 >= 1.5);
  CHECK(static_cast<double>(s50) / s25 <= 2.5);

  for (long q : {1L, 3L, 8L, 50L})
    for (double X : {1.0, 10.0, 200.0}) {
      PoissonCase c{W, 1 % q, q, X, false};
      double thr = 10.0 * q / X * std::pow(q * X, 0.05);
      auto prof = dual_truncation_profile(c);
      std::map<long, double> by_m;
      for (const auto& t : prof) {
        by_m[t.m] = t.magnitude;
        if (std::fabs(static_cast<double>(t.m)) >= thr) REQUIRE(t.magnitude <= 1e-8);
        REQUIRE(t.congruent == (((t.m + 1 % q) % q + q) % q == 0));
      }
      for (const auto& [m, v] : by_m)
        if (by_m.count(-m)) REQUIRE(std::fabs(v - by_m[-m]) <= 1e-14 * std::max(1.0, v));
    }
}
