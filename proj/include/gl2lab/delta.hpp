#pragma once

#include <complex>
#include <vector>

#include "gl2lab/numerics/bump.hpp"

namespace gl2lab {

// Duke-Friedlander-Iwaniec expansion of delta(n) for |n| <= 2M:
//   delta(n) = (1/Q) sum_{q <= Q} (1/q) sum*_{a mod q} e(an/q) int g(q,x) e(nx/(qQ)) dx,
// with g(q, .) the Fourier transform of G_q(u) = Delta_q(u) Psi(u), where
//   Delta_q(u) = sum_{r >= 1} (qr)^{-1} [w(qr) - w(|u|/(qr))],
// w a mollifier on [Q/2, Q] with sum_r w(r) = 1, and Psi a plateau equal to 1 on
// |u| <= 2M+1 that vanishes beyond 4M.
class DeltaScheme {
 public:
  explicit DeltaScheme(int M);

  int M() const { return M_; }
  double Q() const { return Q_; }
  int q_max() const { return q_max_; }
  const SmoothBump& w() const { return w_; }
  // Normalised mollifier: sum_{r >= 1} weight(r) = 1.
  double weight(double v) const { return w_norm_ * w_(v); }
  double default_x_cutoff() const { return x_cutoff_; }
  double du() const { return du_; }

  double G(int q, double u) const;
  double g(int q, double x) const;
  double h(int q, double x) const { return g(q, x) - 1.0; }

  // int_{-X}^{X} g(q, x) e(nx/(qQ)) dx, evaluated through the u-representation of g.
  double x_integral(int q, double n, double X) const;

  // Envelope constants: |h(q,x)| <= C (1/(qQ)) (q/Q + |x|)^A and |g(q,x)| <= C' |x|^{-A}, |x| >= 1.
  double envelope_C() const { return C_; }
  double envelope_A() const { return A_; }
  double envelope_C_prime() const { return C_prime_; }

 private:
  int M_;
  double Q_;
  int q_max_;
  SmoothBump w_;
  double x_cutoff_;
  double du_;
  int J_;
  double w_norm_ = 1.0;
  std::vector<double> c_;                      // c_q = sum_s w(qs)/(qs)
  std::vector<std::vector<double>> G_table_;  // G_q(j du), j = 0..J
  double G_exact(int q, double u) const;
  double C_ = 0.0, A_ = 2.0, C_prime_ = 0.0;
};

DeltaScheme build_scheme(int M);

// Truncated right side of the expansion at n; throws std::out_of_range for |n| > 2M.
// x_cutoff <= 0 selects the scheme default 6 M^{0.1}.
double delta_eval(long n, const DeltaScheme& scheme, double x_cutoff = 0.0);

// Same for several n, parallel over q with a fixed-order reduction.
std::vector<double> delta_eval_many(const std::vector<long>& ns, const DeltaScheme& scheme, double x_cutoff = 0.0,
                                    int workers = 1);

// Literal evaluation: explicit sum over reduced residues a and Gauss-Legendre
// quadrature in x of the tabulated g(q, x). Slow; used as a cross-check.
std::complex<double> delta_eval_direct(long n, const DeltaScheme& scheme, double x_cutoff = 0.0);

struct ConductorKernel {
  double N = 0.0;
  double K = 0.0;
  SmoothBump V;
};

// Kernel with the default unit-mass weight V (center 14, half-width 13, taper 9).
ConductorKernel make_conductor_kernel(double N, double K);

// (1/K) int V(nu/K) (m/n)^{i nu} d nu = int V(y) (m/n)^{iKy} dy.
std::complex<double> conductor_kernel_eval(long m, long n, const ConductorKernel& kernel);

struct CircleIdentityOptions {
  double x_cutoff = 35.0;
  int workers = 1;
};

struct CircleIdentityResult {
  std::complex<double> direct;
  std::complex<double> reconstructed;
  double relative_gap = 0.0;
  int M = 0;
  double Q = 0.0;
  std::vector<int> block_starts;                  // C = 1, 2, 4, ...
  std::vector<std::complex<double>> block_values;  // S_C(N)
};

// S(N) = sum_{N <= n < 2N} lf(n) lg(n) n^{-it} directly and through the delta
// expansion with conductor lowering, summed over dyadic blocks q ~ C.
CircleIdentityResult circle_method_identity(long N, double K, double t, const std::vector<double>& lambda_f,
                                            const std::vector<double>& lambda_g,
                                            const CircleIdentityOptions& opt = {});

}  // namespace gl2lab
