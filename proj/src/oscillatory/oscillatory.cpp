#include "gl2lab/oscillatory.hpp"

#include <algorithm>
#include <numbers>
#include <random>

#include "gl2lab/numerics/compensated.hpp"
#include "gl2lab/numerics/quadrature.hpp"
#include "gl2lab/parallel.hpp"

namespace gl2lab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool monotone(const std::vector<double>& v) {
  if (v.size() < 3) return true;
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::fabs(x));
  double slack = 1e-12 * scale;
  bool up = true, down = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1] - slack) up = false;
    if (v[i] > v[i - 1] + slack) down = false;
  }
  return up || down;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void check_certificate_preconditions(const PhaseProfile& p, int samples) {
  if (!(p.b > p.a)) throw CertificateError("certificate: empty interval");
  if (!(p.r > 0.0) || !(p.M >= 0.0)) throw CertificateError("certificate: need r > 0 and M >= 0");
  if (!p.f || !p.fprime || !p.fsecond || !p.g) throw CertificateError("certificate: incomplete profile");
  samples = std::max(samples, 3);
  int sign = 0;
  std::vector<double> ratios;
  int run_sign = 0;
  for (int i = 0; i < samples; ++i) {
    double x = p.a + (p.b - p.a) * i / (samples - 1);
    double f2 = p.fsecond(x);
    int s = f2 > 0.0 ? 1 : (f2 < 0.0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) throw CertificateError("certificate: f'' changes sign or vanishes");
    sign = s;
    if (std::fabs(f2) < p.r) throw CertificateError("certificate: |f''| falls below r");
    double g = p.g(x);
    if (std::fabs(g) > p.M) throw CertificateError("certificate: |g| exceeds M");
    double f1 = p.fprime(x);
    int fs = f1 > 0.0 ? 1 : (f1 < 0.0 ? -1 : 0);
    if (fs != run_sign) {
      if (!monotone(ratios)) throw CertificateError("certificate: g/f' is not monotone");
      ratios.clear();
      run_sign = fs;
    }
    if (fs != 0) ratios.push_back(g / f1);
  }
  if (!monotone(ratios)) throw CertificateError("certificate: g/f' is not monotone");
}

Certificate second_derivative_certificate(const PhaseProfile& p) {
  check_certificate_preconditions(p);
  Certificate c;
  c.bound = 8.0 * p.M / std::sqrt(p.r);
  auto q = integrate(p.g, p.f, p.a, p.b, 1e-12, p.fprime);
  c.integral_error = q.error_estimate;
  c.measured = std::abs(q.value) + q.error_estimate;
  return c;
}

std::vector<PhaseProfile> random_certified_profiles(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  std::vector<PhaseProfile> out;
  while (out.size() < count) {
    double a = uni(-2.0, 2.0), len = uni(0.2, 3.0), b = a + len;
    double alpha = std::exp(uni(std::log(0.5), std::log(400.0)));
    double s = unit(rng) < 0.5 ? -1.0 : 1.0;
    double c = uni(a - 0.5 * len, b + 0.5 * len);
    double reach = std::max(std::fabs(a - c), std::fabs(b - c));
    double beta = uni(-0.9, 0.9) * alpha / (3.0 * reach);
    double gamma = uni(-5.0, 5.0);
    double amp = std::exp(uni(std::log(0.1), std::log(10.0)));
    double kappa = uni(0.0, 2.0);
    int shape = static_cast<int>(unit(rng) * 3.0);

    PhaseProfile p;
    p.a = a;
    p.b = b;
    p.f = [=](double x) { return s * (alpha * (x - c) * (x - c) + beta * (x - c) * (x - c) * (x - c)) + gamma * x; };
    p.fprime = [=](double x) { return s * (2.0 * alpha * (x - c) + 3.0 * beta * (x - c) * (x - c)) + gamma; };
    p.fsecond = [=](double x) { return s * (2.0 * alpha + 6.0 * beta * (x - c)); };
    switch (shape) {
      case 0: p.g = [=](double) { return amp; }; break;
      case 1: p.g = [=](double x) { return amp * (1.0 + kappa * (x - a)); }; break;
      default: p.g = [=](double x) { return amp * std::exp(-kappa * (x - a)); }; break;
    }
    p.r = std::min(std::fabs(p.fsecond(a)), std::fabs(p.fsecond(b)));
    p.M = std::max(std::fabs(p.g(a)), std::fabs(p.g(b)));
    try {
      check_certificate_preconditions(p);
    } catch (const CertificateError&) {
      continue;
    }
    out.push_back(std::move(p));
  }
  return out;
}

SmoothBump default_osc_weight() { return SmoothBump(1.025, 0.775, 0.0); }

SmoothBump default_kernel_weight() { return SmoothBump(1.4, 0.4, 6.0); }

IntegralValue eval_I(double n, long q, double nu, double u, double N, double Q, const SmoothBump& w, int sign) {
  if (q < 1 || !(N > 0.0) || !(Q > 0.0) || n < 0.0) throw std::invalid_argument("eval_I: need q >= 1, N, Q > 0, n >= 0");
  if (!(w.lo() > 0.0)) throw std::invalid_argument("eval_I: weight must be supported in (0, inf)");
  double qd = static_cast<double>(q), sg = sign >= 0 ? 1.0 : -1.0;
  double lin = N * u / (qd * Q), root = 2.0 * std::sqrt(n * N) / qd;
  auto phase = [=](double x) { return lin * x + sg * root * std::sqrt(x) - nu / kTwoPi * std::log(x); };
  auto dphase = [=](double x) { return lin + sg * 0.5 * root / std::sqrt(x) - nu / (kTwoPi * x); };
  QuadratureOptions opt;
  opt.abs_tol = 1e-11;
  auto r = integrate_complex([&](double x) { return cplx(w(x), 0.0); }, phase, w.lo(), w.hi(), opt, dphase);
  return {r.value, r.error_estimate};
}

double TransformPhase::Q() const { return std::sqrt(N / K); }
double TransformPhase::M0() const {
  double qd = static_cast<double>(q);
  return qd * qd * t * t / N + K;
}
double TransformPhase::N0() const {
  double qd = static_cast<double>(q);
  return qd * qd * K * K / N + K;
}
double TransformPhase::y1_limit() const { return static_cast<double>(q) / (Q() * K); }

bool TransformPhase::admissible() const {
  return q >= 1 && t > 0.0 && N > 0.0 && K > 0.0 && m >= 0.0 && n >= 0.0 && m <= M0() && n <= N0() &&
         std::fabs(y1) <= y1_limit() * (1.0 + 1e-12);
}

double TransformPhase::P(double y) const {
  double qd = static_cast<double>(q);
  return -t / std::numbers::pi * std::log(y) + 2.0 * std::sqrt(m * N) / qd * y +
         sign * 2.0 * std::sqrt(n * N) / qd * std::sqrt(y * y + y1);
}

double TransformPhase::P1(double y) const {
  double qd = static_cast<double>(q);
  return -t / (std::numbers::pi * y) + 2.0 * std::sqrt(m * N) / qd +
         sign * 2.0 * std::sqrt(n * N) / qd * y / std::sqrt(y * y + y1);
}

double TransformPhase::P2(double y) const {
  double qd = static_cast<double>(q);
  double s = y * y + y1;
  return t / (std::numbers::pi * y * y) + sign * 2.0 * std::sqrt(n * N) / qd * y1 / (s * std::sqrt(s));
}

std::vector<double> phase_stationary_points(const TransformPhase& p, double y_lo, double y_hi) {
  const int grid = 512;
  std::vector<double> roots;
  auto f = [&p](double y) { return p.P1(y); };
  double prev_y = y_lo, prev = f(y_lo);
  if (prev == 0.0) roots.push_back(y_lo);
  for (int i = 1; i <= grid; ++i) {
    double y = y_lo + (y_hi - y_lo) * i / grid;
    double v = f(y);
    if (v == 0.0) {
      roots.push_back(y);
    } else if (prev != 0.0 && (v < 0.0) != (prev < 0.0)) {
      roots.push_back(bisect_root(f, prev_y, y));
    }
    prev_y = y;
    prev = v;
  }
  return roots;
}

namespace {

QuadratureResult curly_quadrature(const TransformPhase& p, const SmoothBump& w) {
  if (p.q < 1 || !(p.N > 0.0) || p.m < 0.0 || p.n < 0.0) throw std::invalid_argument("curly_I: bad parameters");
  if (!(w.lo() > 0.0) || !(w.lo() + p.y1 > 0.0))
    throw std::invalid_argument("curly_I: weight support must keep x and x + y1 positive");
  double qd = static_cast<double>(p.q), sg = p.sign >= 0 ? 1.0 : -1.0;
  double am = 2.0 * std::sqrt(p.m * p.N) / qd, an = 2.0 * std::sqrt(p.n * p.N) / qd, y1 = p.y1, t = p.t;
  auto phase = [=](double x) { return -t / kTwoPi * std::log(x) + am * std::sqrt(x) + sg * an * std::sqrt(x + y1); };
  auto dphase = [=](double x) {
    return -t / (kTwoPi * x) + 0.5 * am / std::sqrt(x) + sg * 0.5 * an / std::sqrt(x + y1);
  };
  QuadratureOptions opt;
  opt.abs_tol = 1e-11;
  return integrate_complex([&](double x) { return cplx(w(x), 0.0); }, phase, w.lo(), w.hi(), opt, dphase);
}

}  // namespace

CurlyIResult eval_curly_I(const TransformPhase& p, const SmoothBump& w) {
  auto r = curly_quadrature(p, w);
  CurlyIResult out;
  out.value = r.value;
  out.error_estimate = r.error_estimate;
  double ylo = std::sqrt(w.lo()), yhi = std::sqrt(w.hi());
  out.stationary_points = phase_stationary_points(p, ylo, yhi);
  out.min_abs_P2 = INFINITY;
  for (int i = 0; i <= 2000; ++i) out.min_abs_P2 = std::min(out.min_abs_P2, std::fabs(p.P2(ylo + (yhi - ylo) * i / 2000)));
  return out;
}

cplx curly_I_value(const TransformPhase& p, const SmoothBump& w) { return curly_quadrature(p, w).value; }

CauchyPoissonKernel::CauchyPoissonKernel(const TransformPhase& p, double n1, double n2, long d, double M0, double k_max,
                                         const SmoothBump& w, const SmoothBump& v, int workers)
    : M0_(M0), d_(d), k_max_(std::fabs(k_max)) {
  if (d < 1 || p.q % d != 0) throw std::invalid_argument("kernel_I_k: d must divide q");
  if (!(M0 > 0.0)) throw std::invalid_argument("kernel_I_k: M0 must be positive");
  double lo = v.lo(), hi = v.hi(), qd = static_cast<double>(p.q);
  if (!(lo > 0.0)) throw std::invalid_argument("kernel_I_k: z-weight must be supported in (0, inf)");
  // Frequency in z of I(M0 z, n) is at most sqrt(M0 N x / z)/q over the supports.
  double band = std::sqrt(M0 * p.N * w.hi() / lo) / qd;
  double cycles = (k_max_ * M0 / static_cast<double>(d) + 2.0 * band) * (hi - lo);
  int panels = 16 + static_cast<int>(std::ceil(1.5 * cycles));
  const auto& rule = gauss_legendre(10);
  double h = (hi - lo) / panels;
  for (int i = 0; i < panels; ++i) {
    double c = lo + (i + 0.5) * h;
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
      double z = c + 0.5 * h * rule.x[j];
      double wz = v(z);
      if (wz == 0.0) continue;
      z_.push_back(z);
      weight_.push_back(0.5 * h * rule.w[j] * wz);
    }
  }
  bool same = n1 == n2;
  G_ = parallel_map<cplx>(z_.size(), workers, [&](std::size_t i) {
    TransformPhase a = p;
    a.m = M0 * z_[i];
    a.n = n1;
    cplx i1 = curly_I_value(a, w);
    if (same) return cplx(std::norm(i1), 0.0);
    a.n = n2;
    return i1 * std::conj(curly_I_value(a, w));
  });
}

cplx CauchyPoissonKernel::operator()(double k) const {
  if (std::fabs(k) > k_max_ * (1.0 + 1e-12)) throw std::out_of_range("kernel_I_k: k exceeds the tabulated range");
  double f = k * M0_ / static_cast<double>(d_);
  CompensatedComplexSum s;
  for (std::size_t i = 0; i < z_.size(); ++i) s.add(weight_[i] * e(f * z_[i]) * G_[i]);
  return s.value();
}

cplx kernel_I_k(long k, double n1, double n2, const TransformPhase& p, long d, double M0, const SmoothBump& w,
                const SmoothBump& v, int workers) {
  CauchyPoissonKernel kern(p, n1, n2, d, M0, static_cast<double>(std::labs(k)), w, v, workers);
  return kern(static_cast<double>(k));
}

double kernel_truncation(double t, long d, double M0) { return 10.0 * t * static_cast<double>(d) / M0; }

double diagonal_threshold(const TransformPhase& p) {
  return 10.0 * std::pow(p.t, 0.05) * static_cast<double>(p.q) * std::sqrt(p.N0()) / std::sqrt(p.N);
}

DiagonalCheck diagonal_constraint_check(double n1, double n2, const TransformPhase& p, double M0, const SmoothBump& w,
                                        const SmoothBump& v, int workers) {
  DiagonalCheck r;
  r.threshold = diagonal_threshold(p);
  CauchyPoissonKernel kern(p, n1, n2, 1, M0, 0.0, w, v, workers);
  r.kernel_abs = std::abs(kern(0.0));
  r.ok = std::fabs(n1 - n2) <= r.threshold || r.kernel_abs <= 1e-6;
  return r;
}

double stationary_m(const TransformPhase& p, double x0) {
  double y0 = std::sqrt(x0), qd = static_cast<double>(p.q);
  double rhs = p.t / (std::numbers::pi * y0) - p.sign * 2.0 * std::sqrt(p.n * p.N) / qd * y0 / std::sqrt(x0 + p.y1);
  if (!(rhs > 0.0)) throw std::domain_error("stationary_m: no m places the stationary point at x0");
  double root = qd * rhs / (2.0 * std::sqrt(p.N));
  return root * root;
}

USplit u_integral_split(const DeltaScheme& scheme, int q, double U, const std::vector<double>& s_grid) {
  if (q < 1 || q > scheme.q_max()) throw std::out_of_range("u_integral_split: q outside the scheme");
  if (!(U > 0.0)) throw std::invalid_argument("u_integral_split: U must be positive");
  USplit r;
  // h is tabulated once on a fine grid; the s-integrals reuse it.
  const int panels = 400;
  const auto& rule = gauss_legendre(10);
  std::vector<double> us, ws;
  double h = 2.0 * U / panels;
  for (int i = 0; i < panels; ++i) {
    double c = -U + (i + 0.5) * h;
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
      double u = c + 0.5 * h * rule.x[j];
      us.push_back(u);
      ws.push_back(0.5 * h * rule.w[j] * scheme.h(q, u));
    }
  }
  for (double s : s_grid) {
    double one = s == 0.0 ? 2.0 * U : std::fabs(std::sin(kTwoPi * s * U) / (std::numbers::pi * s));
    CompensatedComplexSum acc;
    for (std::size_t i = 0; i < us.size(); ++i) acc.add(ws[i] * e(s * us[i]));
    r.one_part = std::max(r.one_part, one);
    r.h_part = std::max(r.h_part, std::abs(acc.value()));
  }
  return r;
}

}  // namespace gl2lab
