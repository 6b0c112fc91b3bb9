#include "gl2lab/numerics/quadrature.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace gl2lab {

const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  GaussLegendreRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)), pp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      long double p1 = 1, p2 = 0;
      for (int j = 0; j < n; ++j) {
        long double p3 = p2;
        p2 = p1;
        p1 = ((2 * j + 1) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1);
      long double dz = p1 / pp;
      z -= dz;
      if (std::fabs(static_cast<double>(dz)) < 1e-19) break;
    }
    r.x[i] = -static_cast<double>(z);
    r.x[n - 1 - i] = static_cast<double>(z);
    r.w[i] = r.w[n - 1 - i] = static_cast<double>(2 / ((1 - z * z) * pp * pp));
  }
  return cache.emplace(n, std::move(r)).first->second;
}

QuadratureResult integrate_complex(const std::function<cplx(double)>& amplitude,
                                   const std::function<double(double)>& phase, double a, double b,
                                   const QuadratureOptions& opt,
                                   const std::function<double(double)>& phase_derivative) {
  if (!(a < b)) throw std::invalid_argument("integrate: require a < b");
  std::function<double(double)> fp = phase_derivative;
  if (!fp) {
    double hstep = 1e-6 * std::max(1.0, b - a);
    fp = [&phase, hstep](double x) { return (phase(x + hstep) - phase(x - hstep)) / (2.0 * hstep); };
  }
  auto br = oscillation_breaks(fp, a, b);
  auto h = [&](double x) { return amplitude(x) * e(phase(x)); };
  return integrate_adaptive(h, br, opt);
}

QuadratureResult integrate(const std::function<double(double)>& amplitude, const std::function<double(double)>& phase,
                           double a, double b, double tol, const std::function<double(double)>& phase_derivative) {
  QuadratureOptions opt;
  opt.abs_tol = tol;
  return integrate_complex([&amplitude](double x) { return cplx(amplitude(x), 0.0); }, phase, a, b, opt,
                           phase_derivative);
}

}  // namespace gl2lab
