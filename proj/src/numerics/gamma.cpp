#include "gl2lab/numerics/gamma.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gl2lab {

using cplx = std::complex<double>;

cplx log_gamma(cplx z) {
  static const double p[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059,   12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const double pi = std::numbers::pi;
  if (z.real() < 0.5) {
    cplx s = std::sin(pi * z);
    if (std::abs(s) == 0.0) throw std::domain_error("log_gamma: pole");
    return std::log(pi) - std::log(s) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  cplx x = p[0];
  for (int i = 1; i < 9; ++i) x += p[i] / (z + static_cast<double>(i));
  cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx zeta(cplx s) {
  if (s == cplx(1.0, 0.0)) throw std::domain_error("zeta: pole at s = 1");
  if (s.real() <= -10.0) throw std::domain_error("zeta: Re s must exceed -10");
  if (s.real() < 0.0) {
    // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s) zeta(1 - s)
    const double pi = std::numbers::pi;
    cplx factor = std::exp(s * std::log(2.0) + (s - 1.0) * std::log(pi) + log_gamma(1.0 - s));
    return factor * std::sin(0.5 * pi * s) * zeta(1.0 - s);
  }
  static const double b2k[15] = {1.0 / 6,          -1.0 / 30,          1.0 / 42,           -1.0 / 30,
                                 5.0 / 66,         -691.0 / 2730,      7.0 / 6,            -3617.0 / 510,
                                 43867.0 / 798,    -174611.0 / 330,    854513.0 / 138,     -236364091.0 / 2730,
                                 8553103.0 / 6,    -23749461029.0 / 870, 8615841276005.0 / 14322};
  const int n = 20 + static_cast<int>(std::ceil(std::abs(s)));
  cplx sum = 0.0;
  for (int k = n - 1; k >= 1; --k) sum += std::exp(-s * std::log(static_cast<double>(k)));
  double ln = std::log(static_cast<double>(n));
  cplx nps = std::exp(-s * ln);
  sum += nps * static_cast<double>(n) / (s - 1.0) + 0.5 * nps;
  // sum_k B_{2k}/(2k)! s(s+1)...(s+2k-2) n^{-s-2k+1}
  cplx rising = s;
  cplx power = nps / static_cast<double>(n);
  double fact = 2.0;
  for (int k = 1; k <= 15; ++k) {
    cplx term = b2k[k - 1] / fact * rising * power;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
    power /= static_cast<double>(n) * n;
    fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
  }
  return sum;
}

}  // namespace gl2lab
