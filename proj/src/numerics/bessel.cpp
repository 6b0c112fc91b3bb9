#include "gl2lab/numerics/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace gl2lab {

namespace {

constexpr double kSeriesLimit = 16.0;
constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;

void check_order(int order, double x) {
  if (order < 0 || order > 64) throw std::domain_error("bessel_j: order must lie in [0, 64]");
  if (!(x >= 0.0) || x > 1e5) throw std::domain_error("bessel_j: x must lie in [0, 1e5]");
}

void check_positive(double x, const char* who) {
  if (!(x > 0.0) || x > 1e5) throw std::domain_error(std::string(who) + ": x must lie in (0, 1e5]");
}

// Hankel expansion for order 0 or 1: returns (P, Q).
std::pair<double, double> hankel_pq(int nu, double x) {
  double mu = 4.0 * nu * nu;
  double P = 0.0, Q = 0.0, term = 1.0, prev = INFINITY;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
    double mag = std::fabs(term);
    if (mag > prev) break;
    prev = mag;
    switch (k % 4) {
      case 0: P += term; break;
      case 1: Q += term; break;
      case 2: P -= term; break;
      case 3: Q -= term; break;
    }
    if (mag < 1e-18 * std::fabs(P)) break;
  }
  return {P, Q};
}

// J0, J1 (and optionally Y0) from the Hankel expansion.
void hankel01(double x, double& j0, double& j1, double* y0 = nullptr) {
  double c = std::cos(x), s = std::sin(x);
  double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  const double r = std::numbers::sqrt2 / 2.0;
  auto [p0, q0] = hankel_pq(0, x);
  auto [p1, q1] = hankel_pq(1, x);
  double c0 = r * (c + s), s0 = r * (s - c);  // chi = x - pi/4
  double c1 = r * (s - c), s1 = -r * (s + c);  // chi = x - 3 pi/4
  j0 = amp * (p0 * c0 - q0 * s0);
  j1 = amp * (p1 * c1 - q1 * s1);
  if (y0) *y0 = amp * (p0 * s0 + q0 * c0);
}

// Backward recurrence normalised by J0 + 2 sum J_{2k} = 1.
double miller(int order, double x) {
  int start = static_cast<int>(std::max<double>(order, x) + 40.0 + 10.0 * std::cbrt(x));
  start += start % 2;
  double jp1 = 0.0, j = 1e-300, norm = 0.0, result = 0.0;
  for (int k = start; k >= 1; --k) {
    double jm1 = 2.0 * k / x * j - jp1;
    jp1 = j;
    j = jm1;
    if (std::fabs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      result *= 1e-250;
    }
    // j now holds J_{k-1}
    if (k - 1 == order) result = j;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
  }
  norm += j;
  return result / norm;
}

}  // namespace

double bessel_j_series(int order, double x) {
  check_order(order, x);
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  long double h = x / 2.0L, h2 = h * h;
  long double term = 1.0L;
  for (int i = 1; i <= order; ++i) term *= h / i;
  long double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= -h2 / (static_cast<long double>(k) * (k + order));
    sum += term;
    if (std::fabs(static_cast<double>(term)) < 1e-22 * std::fabs(static_cast<double>(sum)) && k > h) break;
  }
  return static_cast<double>(sum);
}

double bessel_j_large_argument(int order, double x) {
  check_order(order, x);
  if (x < 8.0) throw std::domain_error("bessel_j_large_argument: requires x >= 8");
  double j0, j1;
  hankel01(x, j0, j1);
  if (order == 0) return j0;
  if (order == 1) return j1;
  if (order > x) return miller(order, x);
  double a = j0, b = j1;
  for (int k = 1; k < order; ++k) {
    double c = 2.0 * k / x * b - a;
    a = b;
    b = c;
  }
  return b;
}

double bessel_j(int order, double x) {
  check_order(order, x);
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  if (x <= kSeriesLimit) return bessel_j_series(order, x);
  if (order > x) return miller(order, x);
  return bessel_j_large_argument(order, x);
}

double bessel_y0(double x) {
  check_positive(x, "bessel_y0");
  if (x > kSeriesLimit) {
    double j0, j1, y0;
    hankel01(x, j0, j1, &y0);
    return y0;
  }
  long double h2 = static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L, harmonic = 0.0L, j0 = 1.0L, rest = 0.0L;
  for (int k = 1; k < 300; ++k) {
    term *= -h2 / (static_cast<long double>(k) * k);
    harmonic += 1.0L / k;
    j0 += term;
    rest -= term * harmonic;
    if (std::fabs(static_cast<double>(term)) * (1.0 + static_cast<double>(harmonic)) < 1e-24 && k > x) break;
  }
  long double v = (std::log(static_cast<long double>(x) / 2.0L) + kEulerGamma) * j0 + rest;
  return static_cast<double>(2.0L / std::numbers::pi_v<long double> * v);
}

double bessel_k0(double x) {
  check_positive(x, "bessel_k0");
  if (x <= 2.0) {
    long double h2 = static_cast<long double>(x) * x / 4.0L;
    long double term = 1.0L, harmonic = 0.0L, i0 = 1.0L, rest = 0.0L;
    for (int k = 1; k < 100; ++k) {
      term *= h2 / (static_cast<long double>(k) * k);
      harmonic += 1.0L / k;
      i0 += term;
      rest += term * harmonic;
      if (term < 1e-24L) break;
    }
    return static_cast<double>(-(std::log(static_cast<long double>(x) / 2.0L) + kEulerGamma) * i0 + rest);
  }
  // Steed's continued fraction (Temme's CF2) for order zero.
  double b = 2.0 * (1.0 + x), d = 1.0 / b, h = d, delh = d;
  double q1 = 0.0, q2 = 1.0, a1 = 0.25, q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 100000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    double dels = q * delh;
    s += dels;
    if (std::fabs(dels / s) < 1e-17) break;
  }
  return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
}

}  // namespace gl2lab
