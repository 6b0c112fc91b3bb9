#include <algorithm>
#include <cmath>
#include <numbers>

#include "gl2lab/arith.hpp"
#include "gl2lab/lfunc.hpp"
#include "gl2lab/numerics/compensated.hpp"
#include "gl2lab/numerics/gamma.hpp"
#include "gl2lab/parallel.hpp"

namespace gl2lab {

namespace {

constexpr std::size_t kBlock = 4096;

// E_1(z) for Re z > 0 by the continued fraction
// e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...))), modified Lentz.
cplx expint_e1(cplx z) {
  const double tiny = 1e-300;
  cplx b = z + 1.0;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int k = 1; k < 2000; ++k) {
    double a = -static_cast<double>(k) * k;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-z);
}

cplx power_minus(double n, cplx s) { return std::exp(-s * std::log(n)); }

}  // namespace

RankinSelbergSeries::RankinSelbergSeries(CoefficientSource f, CoefficientSource g) : f_(std::move(f)), g_(std::move(g)) {
  if (!f_.values || !g_.values) throw std::invalid_argument("RankinSelbergSeries: missing coefficient table");
  std::size_t n = std::min(f_.n_max(), g_.n_max());
  if (n < 1) throw std::invalid_argument("RankinSelbergSeries: empty coefficient table");
  auto prod = std::make_shared<std::vector<double>>(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) (*prod)[i] = (*f_.values)[i] * (*g_.values)[i];
  auto coef = std::make_shared<std::vector<double>>(n + 1, 0.0);
  for (std::size_t d = 1; d * d <= n; ++d)
    for (std::size_t m = 1; m * d * d <= n; ++m) (*coef)[m * d * d] += (*prod)[m];
  products_ = std::move(prod);
  coefficients_ = std::move(coef);
}

double RankinSelbergSeries::product(std::size_t n) const {
  if (n < 1 || n > n_max()) throw std::out_of_range("RankinSelbergSeries: index outside the table");
  return (*products_)[n];
}

double RankinSelbergSeries::product_direct(std::size_t n) const {
  if (n < 1 || n > n_max()) throw std::out_of_range("RankinSelbergSeries: index outside the table");
  return (*f_.values)[n] * (*g_.values)[n];
}

cplx RankinSelbergSeries::zeta2s(cplx s) const { return zeta(2.0 * s); }

cplx RankinSelbergSeries::partial_series(cplx s) const {
  CompensatedComplexSum sum;
  for (std::size_t n = 1; n <= n_max(); ++n) sum.add((*products_)[n] * power_minus(static_cast<double>(n), s));
  return sum.value();
}

cplx RankinSelbergSeries::partial_series_with_zeta(cplx s) const {
  CompensatedComplexSum sum;
  for (std::size_t n = 1; n <= n_max(); ++n) sum.add((*coefficients_)[n] * power_minus(static_cast<double>(n), s));
  return sum.value();
}

GammaFactorSpec GammaFactorSpec::for_series(const RankinSelbergSeries& series) {
  auto weight_of = [](const CoefficientSource& c) { return c.kind == SequenceKind::divisor ? 1 : c.weight; };
  GammaFactorSpec g;
  g.k = weight_of(series.f());
  g.k_prime = weight_of(series.g());
  bool holo = series.f().kind == SequenceKind::eigenform && series.g().kind == SequenceKind::eigenform;
  g.tag = holo ? GammaCase::both_holomorphic : GammaCase::other;
  return g;
}

cplx GammaFactorSpec::log_gamma_fg(cplx s) const {
  double shift1 = std::abs(k - k_prime) / 2.0;
  double shift2 = (k + k_prime) / 2.0 - 1.0;
  return log_gamma(s + shift1) + log_gamma(s + shift2);
}

cplx GammaFactorSpec::log_prefactor(cplx s) const { return -s * std::log(4.0 * std::numbers::pi * std::numbers::pi); }

cplx GammaFactorSpec::log_gamma_factor(cplx s) const { return log_prefactor(s) + log_gamma_fg(s); }

ScanParameters scan_parameters(double t, double N) {
  if (!(t >= 10.0)) throw std::invalid_argument("scan_parameters: t must be >= 10");
  if (!(N > 0.0) || N > std::pow(t, 2.05)) throw std::invalid_argument("scan_parameters: need 0 < N <= t^2.05");
  ScanParameters p;
  p.t = t;
  p.N = N;
  p.K = std::pow(t, 0.75);
  p.Q = std::sqrt(N / p.K);
  p.M0 = (p.Q * t) * (p.Q * t) / N + p.K;
  p.N0 = (p.Q * p.K) * (p.Q * p.K) / N + p.K;
  return p;
}

cplx partial_sum_S(long N, double t, const RankinSelbergSeries& series, const SumWindow& window, int workers) {
  if (N < 1) throw std::invalid_argument("partial_sum_S: N must be >= 1");
  if (static_cast<std::size_t>(2 * N) > series.n_max())
    throw std::out_of_range("partial_sum_S: coefficient table does not reach 2N");
  const auto& b = series.products();
  const auto* bump = std::get_if<SmoothBump>(&window);
  const auto lo = static_cast<std::size_t>(N), hi = static_cast<std::size_t>(2 * N);
  const std::size_t blocks = (hi - lo) / kBlock + 1;
  auto partial = parallel_map<cplx>(blocks, workers, [&](std::size_t k) {
    CompensatedComplexSum s;
    std::size_t from = lo + k * kBlock, to = std::min(hi, from + kBlock - 1);
    for (std::size_t n = from; n <= to; ++n) {
      double nd = static_cast<double>(n);
      double w = bump ? (*bump)(nd / static_cast<double>(N)) : 1.0;
      if (w == 0.0) continue;
      s.add(w * b[n] * std::polar(1.0, -t * std::log(nd)));
    }
    return s.value();
  });
  CompensatedComplexSum total;
  for (const auto& z : partial) total.add(z);
  return total.value();
}

std::pair<cplx, cplx> satake_parameters(const CoefficientSource& src, long p) {
  if (p < 2 || static_cast<std::size_t>(p) > src.n_max()) throw std::out_of_range("satake_parameters: p outside the table");
  double lam = (*src.values)[p];
  if (src.kind == SequenceKind::divisor) return {1.0, 1.0};
  cplx root = std::sqrt(cplx(lam * lam - 4.0, 0.0));
  return {(lam + root) / 2.0, (lam - root) / 2.0};
}

EulerProductCheck euler_product_check(const RankinSelbergSeries& series, cplx s, long P, double tol) {
  if (!(s.real() >= 1.5)) throw std::invalid_argument("euler_product_check: need Re s >= 1.5");
  if (P < 2 || static_cast<std::size_t>(P) > series.n_max())
    throw std::out_of_range("euler_product_check: P must lie in [2, n_max]");
  EulerProductCheck r;

  const auto& b = series.products();
  const std::size_t nmax = series.n_max();
  CompensatedComplexSum dir;
  CompensatedSum mass;
  for (std::size_t n = 1; n <= nmax; ++n) {
    dir.add(b[n] * power_minus(static_cast<double>(n), s));
    mass.add(b[n]);
  }
  double Nd = static_cast<double>(nmax);
  cplx z2 = series.zeta2s(s);
  cplx dir_tail = mass.value() / Nd * std::exp((1.0 - s) * std::log(Nd)) / (s - 1.0);
  r.dirichlet_raw = z2 * dir.value();
  r.dirichlet = z2 * (dir.value() + dir_tail);

  Sieve sieve(static_cast<std::size_t>(P));
  CompensatedComplexSum log_sum;
  CompensatedSum prime_mass;
  long upper_primes = 0;
  double sqrtP = std::sqrt(static_cast<double>(P));
  for (auto pu : sieve.primes) {
    long p = static_cast<long>(pu);
    auto [a1, a2] = satake_parameters(series.f(), p);
    auto [b1, b2] = satake_parameters(series.g(), p);
    cplx x = power_minus(static_cast<double>(p), s);
    for (cplx ab : {a1 * b1, a1 * b2, a2 * b1, a2 * b2}) log_sum.add(-std::log(1.0 - ab * x));
    ++r.primes;
    if (static_cast<double>(p) > sqrtP) {
      prime_mass.add(b[p]);
      ++upper_primes;
    }
  }
  double mean_bp = upper_primes ? prime_mass.value() / static_cast<double>(upper_primes) : 0.0;
  cplx prime_tail = mean_bp * expint_e1((s - 1.0) * std::log(static_cast<double>(P)));
  r.euler_raw = std::exp(log_sum.value());
  r.euler = std::exp(log_sum.value() + prime_tail);

  r.gap = std::abs(r.dirichlet - r.euler) / std::abs(r.dirichlet);
  r.raw_gap = std::abs(r.dirichlet_raw - r.euler_raw) / std::abs(r.dirichlet_raw);
  if (!(r.gap <= tol)) throw EulerProductError("euler_product_check: sides disagree beyond the tolerance", r.gap);
  return r;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least_squares_slope: need two or more points");
  double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares_slope: degenerate abscissae");
  return sxy / sxx;
}

}  // namespace gl2lab
