#include "gl2lab/numerics/bump.hpp"

#include <cmath>
#include <stdexcept>

#include "gl2lab/numerics/quadrature.hpp"

namespace gl2lab {

namespace {

// Shape on [-1, 1] and its first four u-derivatives.
std::array<double, 5> shape_derivatives(double u, double k) {
  std::array<double, 5> out{};
  if (!(std::fabs(u) < 1.0)) return out;
  double a = 1.0 - u, b = 1.0 + u;
  double s0 = -1.0 / (a * b) - 0.5 * k * k * u * u;
  if (s0 < -700.0) return out;
  double v = std::exp(s0);
  // -1/(1-u^2) = -(1/2)(1/(1-u) + 1/(1+u))
  double ia = 1.0 / a, ib = 1.0 / b;
  double ia2 = ia * ia, ib2 = ib * ib;
  double s1 = -0.5 * (ia2 - ib2) - k * k * u;
  double s2 = -0.5 * (2.0 * ia2 * ia + 2.0 * ib2 * ib) - k * k;
  double s3 = -0.5 * (6.0 * ia2 * ia2 - 6.0 * ib2 * ib2);
  double s4 = -0.5 * (24.0 * ia2 * ia2 * ia + 24.0 * ib2 * ib2 * ib);
  out[0] = v;
  out[1] = v * s1;
  out[2] = v * (s2 + s1 * s1);
  out[3] = v * (s3 + 3.0 * s1 * s2 + s1 * s1 * s1);
  out[4] = v * (s4 + 4.0 * s1 * s3 + 3.0 * s2 * s2 + 6.0 * s1 * s1 * s2 + s1 * s1 * s1 * s1);
  return out;
}

}  // namespace

SmoothBump::SmoothBump(double center, double width, double taper, bool unit_mass)
    : center_(center), width_(width), taper_(taper) {
  if (!(width > 0.0) || !std::isfinite(center) || !(taper >= 0.0))
    throw std::invalid_argument("SmoothBump: width must be positive and taper nonnegative");
  double k = taper_;
  double unit = gauss_legendre_integrate([k](double u) { return shape_derivatives(u, k)[0]; }, -1.0, 1.0, 256);
  mass_ = unit * width_;
  if (unit_mass) {
    scale_ = 1.0 / mass_;
    mass_ = 1.0;
  }
  const int samples = 20000;
  for (int i = 1; i < samples; ++i) {
    double u = -1.0 + 2.0 * i / samples;
    auto d = shape_derivatives(u, k);
    for (int j = 0; j < 5; ++j) bounds_[j] = std::fmax(bounds_[j], std::fabs(d[j]) * scale_);
  }
  for (auto& c : bounds_) c *= 1.01;
}

double SmoothBump::operator()(double x) const {
  double u = (x - center_) / width_;
  if (!(std::fabs(u) < 1.0)) return 0.0;
  double s0 = -1.0 / ((1.0 - u) * (1.0 + u)) - 0.5 * taper_ * taper_ * u * u;
  if (s0 < -700.0) return 0.0;
  return scale_ * std::exp(s0);
}

std::array<double, 5> SmoothBump::derivatives(double x) const {
  auto d = shape_derivatives((x - center_) / width_, taper_);
  double f = scale_;
  for (int j = 0; j < 5; ++j) {
    d[j] *= f;
    f /= width_;
  }
  return d;
}

double SmoothBump::derivative(int order, double x) const {
  if (order < 0 || order > 4) throw std::out_of_range("SmoothBump::derivative: order must be in 0..4");
  return derivatives(x)[order];
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = std::exp(-1.0 / t);
  double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

}  // namespace gl2lab
