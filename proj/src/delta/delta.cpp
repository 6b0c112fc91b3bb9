#include "gl2lab/delta.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gl2lab/arith.hpp"
#include "gl2lab/numerics/compensated.hpp"
#include "gl2lab/numerics/quadrature.hpp"
#include "gl2lab/parallel.hpp"

namespace gl2lab {

namespace {

constexpr double kPi = std::numbers::pi;

// sum_j c_j e^{i (theta0 + j dtheta)} for j = 0..c.size()-1, by rotation with periodic resync.
template <class Coef>
cplx rotated_sum(std::size_t count, double theta0, double dtheta, Coef&& coef) {
  CompensatedComplexSum acc;
  cplx step(std::cos(dtheta), std::sin(dtheta));
  cplx z;
  for (std::size_t j = 0; j < count; ++j) {
    if (j % 256 == 0) {
      double th = theta0 + static_cast<double>(j) * dtheta;
      z = cplx(std::cos(th), std::sin(th));
    }
    acc.add(coef(j) * z);
    z *= step;
  }
  return acc.value();
}

}  // namespace

DeltaScheme::DeltaScheme(int M) : M_(M) {
  if (M < 4) throw std::invalid_argument("build_scheme: M must be >= 4");
  Q_ = 2.0 * std::sqrt(static_cast<double>(M));
  q_max_ = static_cast<int>(std::floor(Q_ + 1e-12));
  w_ = SmoothBump(0.75 * Q_, 0.25 * Q_, 4.0);
  double total = 0.0;
  for (int r = 1; r <= q_max_ + 1; ++r) total += w_(r);
  w_norm_ = 1.0 / total;
  x_cutoff_ = 6.0 * std::pow(static_cast<double>(M), 0.1);

  du_ = std::min(0.05, Q_ / 320.0);
  J_ = static_cast<int>(std::ceil(4.0 * M / du_));
  du_ = 4.0 * M / J_;

  c_.assign(q_max_ + 1, 0.0);
  G_table_.assign(q_max_ + 1, {});
  for (int q = 1; q <= q_max_; ++q) {
    for (int s = 1; q * s <= q_max_ + 1; ++s) c_[q] += w_norm_ * w_(q * s) / (q * s);
    auto& tab = G_table_[q];
    tab.resize(J_ + 1);
    for (int j = 0; j <= J_; ++j) tab[j] = G_exact(q, j * du_);
  }

  // Envelope constants from a dense grid q <= Q, 0 <= x <= 4.
  for (int q = 1; q <= q_max_; ++q) {
    for (int i = 0; i <= 80; ++i) {
      double x = 0.05 * i;
      double gv = g(q, x);
      double env = std::pow(q / Q_ + x, A_) / (q * Q_);
      C_ = std::max(C_, std::fabs(gv - 1.0) / env);
      if (x >= 1.0) C_prime_ = std::max(C_prime_, std::fabs(gv) * std::pow(x, A_));
    }
  }
  C_ *= 1.05;
  C_prime_ *= 1.05;
}

double DeltaScheme::G_exact(int q, double u) const {
  double au = std::fabs(u);
  double plateau = 2.0 * M_ + 1.0, edge = 4.0 * M_;
  double psi = 1.0 - smooth_step((au - plateau) / (edge - plateau));
  if (psi == 0.0) return 0.0;
  double qQ = q * Q_;
  long s_lo = std::max<long>(1, static_cast<long>(std::ceil(au / qQ)));
  long s_hi = static_cast<long>(std::floor(2.0 * au / qQ));
  double b = 0.0;
  for (long s = s_lo; s <= s_hi; ++s) b += w_norm_ * w_(au / (q * s)) / (q * s);
  return (c_[q] - b) * psi;
}

double DeltaScheme::G(int q, double u) const {
  if (q < 1 || q > q_max_) throw std::out_of_range("DeltaScheme::G: q outside [1, Q]");
  return G_exact(q, u);
}

double DeltaScheme::g(int q, double x) const {
  if (q < 1 || q > q_max_) throw std::out_of_range("DeltaScheme::g: q outside [1, Q]");
  const auto& tab = G_table_[q];
  double dphi = 2.0 * kPi * du_ * x / (q * Q_);
  cplx s = rotated_sum(tab.size(), 0.0, dphi, [&](std::size_t j) { return j == 0 ? 0.5 * tab[0] : tab[j]; });
  return 2.0 * du_ * s.real();
}

double DeltaScheme::x_integral(int q, double n, double X) const {
  if (q < 1 || q > q_max_) throw std::out_of_range("DeltaScheme::x_integral: q outside [1, Q]");
  const auto& tab = G_table_[q];
  const double qQ = q * Q_;
  const double k = 2.0 * kPi * X / qQ;
  // sum over u_j = (j - J) du, j = 0..2J, of G(u_j) sin(k (n - u_j)) / (n - u_j)
  const std::size_t count = 2 * static_cast<std::size_t>(J_) + 1;
  CompensatedSum acc;
  cplx step(std::cos(-k * du_), std::sin(-k * du_));
  cplx z;
  for (std::size_t j = 0; j < count; ++j) {
    long idx = static_cast<long>(j) - J_;
    double u = idx * du_;
    if (j % 256 == 0) {
      double th = k * (n - u);
      z = cplx(std::cos(th), std::sin(th));
    }
    double gv = tab[std::labs(idx)];
    if (gv != 0.0) {
      double v = n - u;
      acc.add(std::fabs(v) < 1e-12 ? gv * k : gv * z.imag() / v);
    }
    z *= step;
  }
  return qQ / kPi * du_ * acc.value();
}

DeltaScheme build_scheme(int M) { return DeltaScheme(M); }

std::vector<double> delta_eval_many(const std::vector<long>& ns, const DeltaScheme& scheme, double x_cutoff,
                                    int workers) {
  for (long n : ns)
    if (std::labs(n) > 2L * scheme.M()) throw std::out_of_range("delta_eval: |n| exceeds the validity range 2M");
  double X = x_cutoff > 0.0 ? x_cutoff : scheme.default_x_cutoff();
  auto per_q = parallel_map<std::vector<double>>(scheme.q_max(), workers, [&](std::size_t i) {
    int q = static_cast<int>(i) + 1;
    std::vector<double> out(ns.size());
    for (std::size_t k = 0; k < ns.size(); ++k) {
      auto r = ramanujan_sum_formula(q, ns[k]);
      out[k] = r == 0 ? 0.0 : r * scheme.x_integral(q, static_cast<double>(ns[k]), X) / (q * scheme.Q());
    }
    return out;
  });
  std::vector<double> result(ns.size());
  for (std::size_t k = 0; k < ns.size(); ++k) {
    CompensatedSum s;
    for (auto& v : per_q) s.add(v[k]);
    result[k] = s.value();
  }
  return result;
}

double delta_eval(long n, const DeltaScheme& scheme, double x_cutoff) {
  return delta_eval_many({n}, scheme, x_cutoff, 1)[0];
}

std::complex<double> delta_eval_direct(long n, const DeltaScheme& scheme, double x_cutoff) {
  if (std::labs(n) > 2L * scheme.M()) throw std::out_of_range("delta_eval: |n| exceeds the validity range 2M");
  double X = x_cutoff > 0.0 ? x_cutoff : scheme.default_x_cutoff();
  const auto& rule = gauss_legendre(10);
  CompensatedComplexSum total;
  for (int q = 1; q <= scheme.q_max(); ++q) {
    cplx character = 0.0;
    for (long a = 1; a <= q; ++a)
      if (gcd64(a, q) == 1) character += e(static_cast<double>(a * (((n % q) + q) % q)) / q);
    double qQ = q * scheme.Q();
    double freq = (4.0 * scheme.M() + std::labs(n)) / qQ;
    int panels = static_cast<int>(std::ceil(2.0 * X * (1.0 + freq) / 0.5));
    double hw = X / panels;
    CompensatedComplexSum integral;
    for (int p = 0; p < panels; ++p) {
      double c = -X + (2 * p + 1) * hw;
      for (std::size_t j = 0; j < rule.x.size(); ++j) {
        double x = c + hw * rule.x[j];
        integral.add(rule.w[j] * hw * scheme.g(q, x) * e(n * x / qQ));
      }
    }
    total.add(character * integral.value() / qQ);
  }
  return total.value();
}

ConductorKernel make_conductor_kernel(double N, double K) {
  if (!(K > 0.0) || !(K < N)) throw std::invalid_argument("ConductorKernel: require 0 < K < N");
  return {N, K, SmoothBump(14.0, 13.0, 9.0, true)};
}

std::complex<double> conductor_kernel_eval(long m, long n, const ConductorKernel& kernel) {
  if (m < 1 || n < 1) throw std::invalid_argument("conductor_kernel_eval: m, n must be positive");
  double L = std::log1p(static_cast<double>(m - n) / static_cast<double>(n));
  double freq = kernel.K * L / (2.0 * kPi);
  const auto& V = kernel.V;
  auto amp = [&V](double y) { return cplx(V(y), 0.0); };
  auto phase = [freq](double y) { return freq * y; };
  auto dphase = [freq](double) { return freq; };
  QuadratureOptions opt;
  opt.abs_tol = 1e-14;
  return integrate_complex(amp, phase, V.lo(), V.hi(), opt, dphase).value;
}

CircleIdentityResult circle_method_identity(long N, double K, double t, const std::vector<double>& lambda_f,
                                            const std::vector<double>& lambda_g, const CircleIdentityOptions& opt) {
  if (N < 2 || N > 10000) throw std::invalid_argument("circle_method_identity: N must lie in [2, 1e4]");
  if (lambda_f.size() < static_cast<std::size_t>(2 * N) || lambda_g.size() < static_cast<std::size_t>(2 * N))
    throw std::length_error("circle_method_identity: coefficient table too short");
  CircleIdentityResult res;

  auto twist = [t](long m) {
    double a = -t * std::log(static_cast<double>(m));
    return cplx(std::cos(a), std::sin(a));
  };
  CompensatedComplexSum direct;
  for (long n = N; n < 2 * N; ++n) direct.add(lambda_f[n] * lambda_g[n] * twist(n));
  res.direct = direct.value();

  double reach = std::min(static_cast<double>(N - 1), 10.0 * N / K);
  int M = std::max(4, static_cast<int>(std::ceil(reach / 2.0)));
  DeltaScheme scheme(M);
  res.M = M;
  res.Q = scheme.Q();
  long hmax = std::min<long>(2L * M, N - 1);
  auto kernel = make_conductor_kernel(static_cast<double>(N), K);

  // P(h) = sum_{n - m = h} lf(n) lg(m) m^{-it} int V(y) (n/m)^{iKy} dy
  auto rows = parallel_map<std::vector<cplx>>(static_cast<std::size_t>(N), opt.workers, [&](std::size_t i) {
    long m = N + static_cast<long>(i);
    std::vector<cplx> row(2 * hmax + 1, 0.0);
    cplx tw = lambda_g[m] * twist(m);
    for (long h = -hmax; h <= hmax; ++h) {
      long n = m + h;
      if (n < N || n >= 2 * N) continue;
      row[h + hmax] = lambda_f[n] * tw * conductor_kernel_eval(n, m, kernel);
    }
    return row;
  });
  std::vector<cplx> P(2 * hmax + 1);
  for (long h = -hmax; h <= hmax; ++h) {
    CompensatedComplexSum s;
    for (auto& row : rows) s.add(row[h + hmax]);
    P[h + hmax] = s.value();
  }

  double X = opt.x_cutoff;
  auto per_q = parallel_map<cplx>(scheme.q_max(), opt.workers, [&](std::size_t i) {
    int q = static_cast<int>(i) + 1;
    auto R = ramanujan_sums(q, 0, hmax);
    CompensatedComplexSum s;
    for (long h = 0; h <= hmax; ++h) {
      if (R[h] == 0) continue;
      double I = scheme.x_integral(q, static_cast<double>(h), X);
      cplx ph = h == 0 ? P[hmax] : P[hmax + h] + P[hmax - h];
      s.add(static_cast<double>(R[h]) * I / (q * scheme.Q()) * ph);
    }
    return s.value();
  });

  CompensatedComplexSum total;
  for (int C = 1; C <= scheme.q_max(); C *= 2) {
    CompensatedComplexSum block;
    for (int q = C; q < 2 * C && q <= scheme.q_max(); ++q) block.add(per_q[q - 1]);
    res.block_starts.push_back(C);
    res.block_values.push_back(block.value());
    total.add(block.value());
  }
  res.reconstructed = total.value();
  res.relative_gap = std::abs(res.reconstructed - res.direct) / std::abs(res.direct);
  return res;
}

}  // namespace gl2lab
