#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gl2lab/delta.hpp"
#include "gl2lab/numerics/bump.hpp"

namespace gl2lab {

using cplx = std::complex<double>;

// Phase f (in cycles: the integrand is g e(f)), amplitude g, interval [a, b],
// and the claimed constants |f''| >= r, |g| <= M.
struct PhaseProfile {
  std::function<double(double)> f, fprime, fsecond, g;
  double a = 0.0, b = 1.0;
  double M = 1.0;
  double r = 1.0;
};

class CertificateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Certificate {
  double bound = 0.0;     // 8 M / sqrt(r)
  double measured = 0.0;  // |int g e(f)| plus the quadrature error estimate
  double integral_error = 0.0;
  bool holds() const { return measured <= bound; }
};

// Checks the hypotheses on a sample grid (f'' single-signed with |f''| >= r,
// |g| <= M, g/f' monotone on each interval where f' keeps its sign) and throws
// CertificateError if one fails.
void check_certificate_preconditions(const PhaseProfile& p, int samples = 4001);
Certificate second_derivative_certificate(const PhaseProfile& p);

// Seeded family of profiles that pass the precondition check (rejection sampling).
std::vector<PhaseProfile> random_certified_profiles(std::size_t count, std::uint64_t seed);

// Weight for the x-integrals below: the plain mollifier on [0.25, 1.8].
SmoothBump default_osc_weight();
// Weight of the Poisson variable z = m/M0 in the Cauchy-Poisson kernels: taper-6 mollifier on [1, 1.8].
SmoothBump default_kernel_weight();

// I(n, q, nu) = int w(x) x^{-i nu} e(N u x/(qQ) + sign 2 sqrt(nNx)/q) dx.
struct IntegralValue {
  cplx value;
  double error_estimate = 0.0;
};
IntegralValue eval_I(double n, long q, double nu, double u, double N, double Q, const SmoothBump& w, int sign = 1);

// Phase data of the reduced integral after x = y^2:
//   P(y) = -(t/pi) log y + (2 sqrt(mN)/q) y + sign (2 sqrt(nN)/q) sqrt(y^2 + y1).
struct TransformPhase {
  double t = 100.0;
  double N = 1e4;
  long q = 1;
  double m = 1.0;
  double n = 1.0;
  double y1 = 0.0;
  double K = 1.0;
  int sign = 1;

  double Q() const;
  double M0() const;        // (qt)^2/N + K
  double N0() const;        // (qK)^2/N + K
  double y1_limit() const;  // q/(QK)
  bool admissible() const;
  double P(double y) const;
  double P1(double y) const;
  double P2(double y) const;
};

struct CurlyIResult {
  cplx value;
  double error_estimate = 0.0;
  std::vector<double> stationary_points;  // roots of P' in y over the support
  double min_abs_P2 = 0.0;                // over y^2 in the support of w
};

// int w(x) x^{-it} e(2 sqrt(mNx)/q + sign 2 sqrt(nN(x+y1))/q) dx
CurlyIResult eval_curly_I(const TransformPhase& p, const SmoothBump& w);
cplx curly_I_value(const TransformPhase& p, const SmoothBump& w);

// Roots of P' in [y_lo, y_hi] by safeguarded bisection on sign changes of a
// sample grid.
std::vector<double> phase_stationary_points(const TransformPhase& p, double y_lo, double y_hi);

// I(k, n1, n2, q) = int v(z) e(k M0 z/d) I(M0 z, n1) conj(I(M0 z, n2)) dz, with v
// the z-weight and w the x-weight inside I. The
// z-integrand is tabulated once on a composite Gauss-Legendre grid fine enough
// for |k| <= k_max and reused for every k.
class CauchyPoissonKernel {
 public:
  CauchyPoissonKernel(const TransformPhase& p, double n1, double n2, long d, double M0, double k_max,
                      const SmoothBump& w, const SmoothBump& v, int workers = 1);
  cplx operator()(double k) const;
  double k_max() const { return k_max_; }
  std::size_t nodes() const { return z_.size(); }

 private:
  double M0_;
  long d_;
  double k_max_;
  std::vector<double> z_, weight_;
  std::vector<cplx> G_;
};

cplx kernel_I_k(long k, double n1, double n2, const TransformPhase& p, long d, double M0, const SmoothBump& w,
                const SmoothBump& v, int workers = 1);

// k beyond which the kernel is negligible: 10 t d / M0.
double kernel_truncation(double t, long d, double M0);

struct DiagonalCheck {
  bool ok = false;
  double threshold = 0.0;  // 10 t^{0.05} q sqrt(N0)/sqrt(N)
  double kernel_abs = 0.0;
};

double diagonal_threshold(const TransformPhase& p);
// True iff |n1 - n2| <= threshold or |I(0, n1, n2, q)| <= 1e-6.
DiagonalCheck diagonal_constraint_check(double n1, double n2, const TransformPhase& p, double M0, const SmoothBump& w,
                                        const SmoothBump& v, int workers = 1);

// m scale at which the stationary point of P sits at x = x0 (n, q, y1 from p).
double stationary_m(const TransformPhase& p, double x0);

// The u-integral of g(q, u) e(s u) over |u| <= U split as 1 + h.
struct USplit {
  double one_part = 0.0;  // sup over s of |int e(su) du|
  double h_part = 0.0;    // sup over s of |int h(q,u) e(su) du|
  double ratio() const { return h_part > 0.0 ? one_part / h_part : INFINITY; }
};
USplit u_integral_split(const DeltaScheme& scheme, int q, double U, const std::vector<double>& s_grid);

}  // namespace gl2lab
