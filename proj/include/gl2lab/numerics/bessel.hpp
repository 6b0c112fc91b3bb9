#pragma once

namespace gl2lab {

// Bessel function of the first kind, integer order 0..64, 0 <= x <= 1e5.
double bessel_j(int order, double x);

// The two regimes of bessel_j, exposed for cross-checks in the overlap band.
double bessel_j_series(int order, double x);
double bessel_j_large_argument(int order, double x);

// Y_0 and K_0 for 0 < x <= 1e5.
double bessel_y0(double x);
double bessel_k0(double x);

}  // namespace gl2lab
