#include <cmath>
#include <numbers>

#include "gl2lab/numerics/compensated.hpp"
#include "gl2lab/numerics/quadrature.hpp"
#include "gl2lab/summation.hpp"

namespace gl2lab {

namespace {

void check_case(const PoissonCase& c) {
  if (c.q < 1) throw std::invalid_argument("poisson: q must be >= 1");
  if (!(c.X > 0.0)) throw std::invalid_argument("poisson: X must be positive");
}

// Frequency beyond which |W-hat| stays at the rounding floor (1e-14 of the
// L1 norm of the weight) on a grid of step 1/8.
double frequency_limit(const PoissonCase& c) {
  double l1 = gauss_legendre_integrate([&](double x) { return std::fabs(poisson_weight(c, x)); }, c.W.lo(), c.W.hi(), 64);
  const double floor = 1e-14 * l1;
  const double step = 0.125, quiet_span = 4.0;
  double xi = 0.0, last_loud = 0.0;
  while (xi - last_loud < quiet_span) {
    if (std::abs(poisson_fourier(c, xi)) > floor) last_loud = xi;
    xi += step;
    if (xi > 1e4) break;
  }
  return last_loud + step;
}

}  // namespace

SmoothBump default_poisson_weight() { return SmoothBump(2.0, 1.0, 9.0); }

double poisson_weight(const PoissonCase& c, double x) { return c.derivative_weight ? c.W.derivative(1, x) : c.W(x); }

cplx poisson_fourier(const PoissonCase& c, double xi) {
  double a = c.W.lo(), b = c.W.hi(), mid = c.W.center();
  int panels = 16 + static_cast<int>(std::ceil(4.0 * std::fabs(xi) * (b - a)));
  double w = 2.0 * std::numbers::pi * xi;
  double re = gauss_legendre_integrate([&](double x) { return poisson_weight(c, x) * std::cos(w * (x - mid)); }, a, b,
                                       panels);
  double im = gauss_legendre_integrate([&](double x) { return -poisson_weight(c, x) * std::sin(w * (x - mid)); }, a, b,
                                       panels);
  return cplx(re, im) * e(-mid * xi);
}

PoissonResult poisson_two_sided(const PoissonCase& c) {
  check_case(c);
  PoissonResult r;
  CompensatedComplexSum lhs;
  auto lo = static_cast<long>(std::floor(c.X * c.W.lo()));
  auto hi = static_cast<long>(std::ceil(c.X * c.W.hi()));
  long ar = ((c.a % c.q) + c.q) % c.q;
  for (long n = lo; n <= hi; ++n) {
    double w = poisson_weight(c, static_cast<double>(n) / c.X);
    if (w == 0.0) continue;
    long nr = ((n % c.q) + c.q) % c.q;
    lhs.add(w * e(static_cast<double>(ar * nr % c.q) / static_cast<double>(c.q)));
  }
  r.lhs = lhs.value();

  double qd = static_cast<double>(c.q);
  auto m_max = static_cast<long>(std::ceil(frequency_limit(c) * qd / c.X));
  CompensatedComplexSum rhs;
  for (long m = -m_max; m <= m_max; ++m) {
    CompensatedComplexSum alpha;
    long s = (((ar + m) % c.q) + c.q) % c.q;
    for (long al = 0; al < c.q; ++al) alpha.add(e(static_cast<double>(al * s % c.q) / qd));
    cplx weight = alpha.value();
    if (std::abs(weight) < 1e-9) continue;
    rhs.add(weight * poisson_fourier(c, static_cast<double>(m) * c.X / qd));
    ++r.dual_terms;
  }
  r.rhs = c.X / qd * rhs.value();
  return r;
}

std::vector<DualTerm> dual_truncation_profile(const PoissonCase& c) {
  check_case(c);
  double qd = static_cast<double>(c.q);
  auto m_max = static_cast<long>(std::ceil(frequency_limit(c) * qd / c.X));
  long ar = ((c.a % c.q) + c.q) % c.q;
  std::vector<DualTerm> out;
  out.reserve(2 * m_max + 1);
  for (long m = -m_max; m <= m_max; ++m) {
    DualTerm t;
    t.m = m;
    t.magnitude = c.X * std::abs(poisson_fourier(c, static_cast<double>(m) * c.X / qd));
    t.congruent = (((ar + m) % c.q) + c.q) % c.q == 0;
    out.push_back(t);
  }
  return out;
}

}  // namespace gl2lab
