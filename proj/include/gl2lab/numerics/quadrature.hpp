#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <queue>
#include <vector>

namespace gl2lab {

using cplx = std::complex<double>;

// e(z) = exp(2 pi i z)
inline cplx e(double z) {
  double r = z - std::nearbyint(z);
  double a = 2.0 * std::numbers::pi * r;
  return {std::cos(a), std::sin(a)};
}

struct QuadratureResult {
  cplx value{0.0, 0.0};
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  long max_evaluations = 4'000'000;
};

namespace detail {

struct Panel {
  double a, b;
  cplx value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Panel kronrod15(F& h, double a, double b) {
  double c = 0.5 * (a + b), r = 0.5 * (b - a);
  cplx fc = h(c);
  cplx k = fc * kWgk[7];
  cplx g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    double dx = r * kXgk[j];
    cplx f1 = h(c - dx), f2 = h(c + dx);
    k += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) g += (f1 + f2) * kWg[j / 2];
  }
  return {a, b, k * r, std::abs((k - g) * r)};
}

}  // namespace detail

// Adaptive Gauss-Kronrod (7/15) integration of a complex integrand over the
// panels delimited by `breaks` (sorted, at least two entries). Panels with the
// largest error are bisected until the summed error meets the tolerance.
template <class F>
QuadratureResult integrate_adaptive(F&& h, const std::vector<double>& breaks, const QuadratureOptions& opt = {}) {
  QuadratureResult res;
  std::priority_queue<detail::Panel> heap;
  cplx total = 0.0;
  double err = 0.0;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    auto p = detail::kronrod15(h, breaks[i], breaks[i + 1]);
    res.evaluations += 15;
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  while (!heap.empty() && err > target()) {
    if (res.evaluations + 30 > opt.max_evaluations) {
      res.converged = false;
      break;
    }
    auto p = heap.top();
    double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      res.converged = false;
      break;
    }
    heap.pop();
    auto l = detail::kronrod15(h, p.a, m);
    auto r = detail::kronrod15(h, m, p.b);
    res.evaluations += 30;
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
  }
  // Re-add from scratch to shed the drift of the running updates.
  cplx sum = 0.0;
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  res.value = sum;
  res.error_estimate = esum;
  if (res.converged && esum > target()) res.converged = false;
  return res;
}

// Breakpoints on [a, b] with spacing at most 1/(1 + |f'|) in the phase f
// (cycles per unit length), capped at max_panels.
template <class D>
std::vector<double> oscillation_breaks(D&& fprime, double a, double b, long max_panels = 200000) {
  std::vector<double> br{a};
  double x = a;
  double min_step = (b - a) / static_cast<double>(max_panels);
  while (x < b) {
    double step = 1.0 / (1.0 + std::fabs(fprime(x)));
    // Look ahead so that a sharp rise inside the step is respected.
    double ahead = 1.0 / (1.0 + std::fabs(fprime(std::min(b, x + step))));
    step = std::max(min_step, std::min(step, ahead));
    x = std::min(b, x + step);
    br.push_back(x);
  }
  return br;
}

// Integral of g(x) e(f(x)) over [a, b]; fprime may be empty, in which case the
// phase derivative is estimated by central differences.
QuadratureResult integrate(const std::function<double(double)>& amplitude, const std::function<double(double)>& phase,
                           double a, double b, double tol,
                           const std::function<double(double)>& phase_derivative = {});

// Same with a complex amplitude and general options.
QuadratureResult integrate_complex(const std::function<cplx(double)>& amplitude,
                                   const std::function<double(double)>& phase, double a, double b,
                                   const QuadratureOptions& opt,
                                   const std::function<double(double)>& phase_derivative = {});

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> x, w;
};
const GaussLegendreRule& gauss_legendre(int n);

// Composite Gauss-Legendre (10 points per panel) with `panels` equal panels.
template <class F>
double gauss_legendre_integrate(F&& f, double a, double b, int panels) {
  const auto& rule = gauss_legendre(10);
  double h = (b - a) / panels, total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double c = a + (p + 0.5) * h, s = 0.0;
    for (size_t j = 0; j < rule.x.size(); ++j) s += rule.w[j] * f(c + 0.5 * h * rule.x[j]);
    total += 0.5 * h * s;
  }
  return total;
}

}  // namespace gl2lab
