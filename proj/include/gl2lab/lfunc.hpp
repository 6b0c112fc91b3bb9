#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gl2lab/numerics/bump.hpp"
#include "gl2lab/summation.hpp"

namespace gl2lab {

using cplx = std::complex<double>;

// L(s, f x g) = zeta(2s) sum_n lambda_f(n) lambda_g(n) n^{-s}, with the products
// cached up to the shorter of the two tables.
class RankinSelbergSeries {
 public:
  RankinSelbergSeries(CoefficientSource f, CoefficientSource g);

  const CoefficientSource& f() const { return f_; }
  const CoefficientSource& g() const { return g_; }
  std::size_t n_max() const { return products_->size() - 1; }

  // lambda_f(n) lambda_g(n) from the cache, and recomputed from the sources.
  double product(std::size_t n) const;
  double product_direct(std::size_t n) const;
  const std::vector<double>& products() const { return *products_; }
  // Coefficients of the full series: sum over d^2 | n of product(n / d^2).
  const std::vector<double>& coefficients() const { return *coefficients_; }

  cplx zeta2s(cplx s) const;
  // sum_{n <= n_max} product(n) n^{-s}, without and with the zeta(2s) factor.
  cplx partial_series(cplx s) const;
  cplx partial_series_with_zeta(cplx s) const;

 private:
  CoefficientSource f_, g_;
  std::shared_ptr<const std::vector<double>> products_;
  std::shared_ptr<const std::vector<double>> coefficients_;
};

enum class GammaCase { both_holomorphic, other };

// Gamma_{f,g}(s) = Gamma(s + |k - k'|/2) Gamma(s + (k + k')/2 - 1) and the
// prefactor (qD/4pi^2)^s with q = D = 1. The divisor function enters with
// k' = 1, which reproduces the gamma factor of L(s, f)^2.
struct GammaFactorSpec {
  GammaCase tag = GammaCase::both_holomorphic;
  int k = 12;
  int k_prime = 12;

  static GammaFactorSpec for_series(const RankinSelbergSeries& series);
  cplx log_gamma_fg(cplx s) const;
  cplx log_prefactor(cplx s) const;
  // log of gamma(s) = (1/4pi^2)^s Gamma_{f,g}(s)
  cplx log_gamma_factor(cplx s) const;
};

struct ScanParameters {
  double t = 0.0, N = 0.0, K = 0.0, Q = 0.0, M0 = 0.0, N0 = 0.0;
};
ScanParameters scan_parameters(double t, double N);

// Sum over N <= n <= 2N of w(n) lambda_f(n) lambda_g(n) n^{-it}, where w is 1
// (sharp) or the bump evaluated at n/N. Blocks of fixed length are summed with
// compensation and combined in block order, so the result does not depend on
// the worker count.
struct SharpWindow {};
using SumWindow = std::variant<SharpWindow, SmoothBump>;
cplx partial_sum_S(long N, double t, const RankinSelbergSeries& series, const SumWindow& window = SharpWindow{},
                   int workers = 1);

// Satake parameters at p from lambda(p): alpha_1 + alpha_2 = lambda(p), alpha_1 alpha_2 = 1.
std::pair<cplx, cplx> satake_parameters(const CoefficientSource& src, long p);

struct EulerProductCheck {
  cplx dirichlet;      // zeta(2s) (sum_{n <= n_max} + tail estimate)
  cplx euler;          // prod_{p <= P} local factors, times a prime-tail estimate
  cplx dirichlet_raw;  // without tail estimates
  cplx euler_raw;
  double gap = 0.0;  // |dirichlet - euler| / |dirichlet|
  double raw_gap = 0.0;
  long primes = 0;
};

class EulerProductError : public std::runtime_error {
 public:
  EulerProductError(const std::string& what, double gap) : std::runtime_error(what), gap_(gap) {}
  double achieved_gap() const { return gap_; }

 private:
  double gap_;
};

// Both sides at Re s >= 1.5. The tail estimates use the mean of the products
// over n (Dirichlet side) and over primes (Euler side). Throws
// EulerProductError when the corrected gap exceeds tol.
EulerProductCheck euler_product_check(const RankinSelbergSeries& series, cplx s, long P, double tol = 1e-6);

enum class Smoothing { gaussian, dyadic };

struct CentralValue {
  cplx value;
  cplx gaussian;
  cplx dyadic;
  double consistency_gap = 0.0;  // |gaussian - dyadic| / |gaussian|
  long terms = 0;                // length of the Dirichlet sums
};

class CentralValueInstability : public std::runtime_error {
 public:
  CentralValueInstability(const std::string& what, const CentralValue& result)
      : std::runtime_error(what), result_(result) {}
  double gap() const { return result_.consistency_gap; }
  const CentralValue& result() const { return result_; }

 private:
  CentralValue result_;
};

// L(1/2 + it) by the approximate functional equation with root number 1,
// evaluated with both smoothings; `smoothing` picks the reported value.
// Throws CentralValueInstability if the two disagree by more than 1e-3 and
// std::out_of_range if the AFE weights have not decayed within the table.
CentralValue central_value(double t, const RankinSelbergSeries& series, const GammaFactorSpec& gf,
                           Smoothing smoothing = Smoothing::gaussian, int workers = 1);

struct ScanRow {
  double t = 0.0;
  double sup_ratio = 0.0;  // sup over dyadic N of |S(N)| / sqrt(N)
  long argmax_N = 0;
  double abs_L = 0.0;
  double consistency_gap = 0.0;
  double runtime_ms = 0.0;
};

struct ExponentScan {
  std::vector<ScanRow> rows;
  double slope = 0.0;  // least-squares slope of log |L| against log t
};

// Dyadic N = 2^j with 2N <= min(t^2, n_max) enter the supremum.
ExponentScan exponent_scan(const std::vector<double>& t_grid, const RankinSelbergSeries& series,
                           const GammaFactorSpec& gf, int workers = 1);

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gl2lab
