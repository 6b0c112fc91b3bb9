#pragma once

#include <array>

namespace gl2lab {

// Smooth compactly supported test function on [c - w, c + w]:
//   phi(x) = A * exp(-1/(1-u^2) - (k u)^2 / 2),  u = (x - c)/w.
// k = 0 is the standard mollifier. A is 1 unless unit mass was requested.
class SmoothBump {
 public:
  SmoothBump() = default;
  SmoothBump(double center, double width, double taper = 0.0, bool unit_mass = false);

  double center() const { return center_; }
  double width() const { return width_; }
  double taper() const { return taper_; }
  double lo() const { return center_ - width_; }
  double hi() const { return center_ + width_; }
  double scale() const { return scale_; }

  double operator()(double x) const;
  // Value and derivatives of order 0..4 at x.
  std::array<double, 5> derivatives(double x) const;
  double derivative(int order, double x) const;

  // Integral over the support.
  double mass() const { return mass_; }
  // Sampled suprema C_j with |phi^{(j)}(x)| <= C_j w^{-j}.
  const std::array<double, 5>& derivative_constants() const { return bounds_; }

 private:
  double center_ = 0.0;
  double width_ = 1.0;
  double taper_ = 0.0;
  double scale_ = 1.0;
  double mass_ = 0.0;
  std::array<double, 5> bounds_{};
};

// Smooth step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);

}  // namespace gl2lab
