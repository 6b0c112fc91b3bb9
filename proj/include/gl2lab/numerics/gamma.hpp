#pragma once

#include <complex>

namespace gl2lab {

// log Gamma(z) for complex z away from the poles (Lanczos, g = 7, n = 9).
// The imaginary part is not reduced to a principal branch.
std::complex<double> log_gamma(std::complex<double> z);

// Riemann zeta for complex s != 1 with Re s > -10 (Euler-Maclaurin).
std::complex<double> zeta(std::complex<double> s);

}  // namespace gl2lab
