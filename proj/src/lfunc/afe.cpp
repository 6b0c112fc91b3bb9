#include <chrono>
#include <cmath>
#include <numbers>

#include "gl2lab/lfunc.hpp"
#include "gl2lab/numerics/quadrature.hpp"
#include "gl2lab/parallel.hpp"

namespace gl2lab {

namespace {

constexpr double kLineShift = 1.0;    // contour Re u = 1
constexpr double kStep = 0.05;        // trapezoid step in Im u
constexpr double kHalfRange = 34.0;   // |Im u| <= 34
constexpr double kWidthGaussian = 16.0;
constexpr double kWidthDyadic = 24.0;
constexpr double kInstability = 1e-3;
constexpr std::size_t kBlock = 8192;

// G(u) = exp(u^2/W - i beta u) psi(u); psi is 1 or the Mellin transform of a
// unit-mass bump in log y on [-log 2, log 2].
class Weight {
 public:
  Weight(double width, double beta, bool dyadic) : width_(width), beta_(beta), dyadic_(dyadic) {}
  cplx operator()(cplx u) const {
    cplx g = std::exp(u * u / width_ - cplx(0.0, beta_) * u);
    return dyadic_ ? g * mellin_bump(u) : g;
  }

 private:
  static cplx mellin_bump(cplx u) {
    static const SmoothBump phi(0.0, std::numbers::ln2, 6.0, true);
    int panels = 8 + static_cast<int>(std::ceil(std::abs(u.imag()) * phi.width()));
    double re = gauss_legendre_integrate([&](double v) { return phi(v) * (std::exp(u * v)).real(); }, phi.lo(),
                                         phi.hi(), panels);
    double im = gauss_legendre_integrate([&](double v) { return phi(v) * (std::exp(u * v)).imag(); }, phi.lo(),
                                         phi.hi(), panels);
    return {re, im};
  }

  double width_, beta_;
  bool dyadic_;
};

struct NodeTable {
  std::vector<double> tau;
  std::vector<cplx> h1, h2;  // weights for the sums at s and at 1 - s
};

// Trapezoid weights of (1/2 pi i) int gamma(s+u)/gamma(s) G(+-u) y^{-u} du/u on Re u = kLineShift.
NodeTable make_nodes(cplx s, const GammaFactorSpec& gf, const Weight& G) {
  NodeTable nt;
  int half = static_cast<int>(std::lround(kHalfRange / kStep));
  cplx ls = gf.log_gamma_factor(s), l1s = gf.log_gamma_factor(1.0 - s);
  for (int j = -half; j <= half; ++j) {
    double tau = j * kStep;
    cplx u(kLineShift, tau);
    cplx c = kStep / (2.0 * std::numbers::pi) / u;
    nt.tau.push_back(tau);
    nt.h1.push_back(c * std::exp(gf.log_gamma_factor(s + u) - ls) * G(u));
    nt.h2.push_back(c * std::exp(gf.log_gamma_factor(1.0 - s + u) - l1s) * G(-u));
  }
  return nt;
}

cplx weight_at(const std::vector<double>& tau, const std::vector<cplx>& h, double y) {
  double ly = std::log(y);
  cplx v = 0.0;
  double mag = std::exp(-kLineShift * ly);
  for (std::size_t j = 0; j < tau.size(); ++j) v += h[j] * std::polar(mag, -tau[j] * ly);
  return v;
}

// Length beyond which |V(y)| stays below 1e-14, about the rounding floor of the
// trapezoid sums, for every weight on a geometric probe.
long afe_length(const std::vector<const NodeTable*>& tables) {
  const double ratio = 1.05;
  const int quiet_needed = 40;
  double y = 1.0, last_loud = 1.0;
  int quiet = 0;
  while (quiet < quiet_needed) {
    double mag = 0.0;
    for (auto* nt : tables)
      mag = std::max({mag, std::abs(weight_at(nt->tau, nt->h1, y)), std::abs(weight_at(nt->tau, nt->h2, y))});
    if (mag > 1e-14) {
      last_loud = y;
      quiet = 0;
    } else {
      ++quiet;
    }
    y *= ratio;
    if (y > 1e12) throw std::runtime_error("central_value: AFE weights do not decay");
  }
  return static_cast<long>(std::ceil(last_loud * ratio));
}

// D_j = sum_{n <= len} a_n n^{-1/2 - c} n^{-i(t + tau_j)}
std::vector<cplx> dirichlet_table(const std::vector<double>& a, long len, double t, const std::vector<double>& tau,
                                  int workers) {
  const std::size_t J = tau.size();
  const std::size_t blocks = (static_cast<std::size_t>(len) + kBlock - 1) / kBlock;
  auto parts = parallel_map<std::vector<cplx>>(blocks, workers, [&](std::size_t k) {
    std::vector<cplx> d(J, 0.0);
    std::size_t from = 1 + k * kBlock, to = std::min(static_cast<std::size_t>(len), from + kBlock - 1);
    for (std::size_t n = from; n <= to; ++n) {
      if (a[n] == 0.0) continue;
      double ln = std::log(static_cast<double>(n));
      double base = a[n] * std::exp(-(0.5 + kLineShift) * ln);
      cplx step = std::polar(1.0, -kStep * ln);
      cplx z;
      for (std::size_t j = 0; j < J; ++j) {
        if (j % 128 == 0) z = std::polar(base, -(t + tau[j]) * ln);
        d[j] += z;
        z *= step;
      }
    }
    return d;
  });
  std::vector<cplx> total(J, 0.0);
  for (const auto& part : parts)
    for (std::size_t j = 0; j < J; ++j) total[j] += part[j];
  return total;
}

cplx assemble(const NodeTable& nt, const std::vector<cplx>& D, cplx root_ratio) {
  const std::size_t J = nt.tau.size();
  cplx first = 0.0, second = 0.0;
  for (std::size_t j = 0; j < J; ++j) {
    first += nt.h1[j] * D[j];
    // sum a_n n^{-(1-s)-u_j} = conj(D at -tau_j) on the critical line.
    second += nt.h2[j] * std::conj(D[J - 1 - j]);
  }
  return first + root_ratio * second;
}

}  // namespace

CentralValue central_value(double t, const RankinSelbergSeries& series, const GammaFactorSpec& gf,
                           Smoothing smoothing, int workers) {
  if (series.f().kind == SequenceKind::divisor && series.g().kind == SequenceKind::divisor)
    throw std::invalid_argument("central_value: divisor x divisor has no gamma factor of this shape");
  cplx s(0.5, t);
  double beta = (t > 0.0) - (t < 0.0);
  beta *= std::numbers::pi;
  Weight ga(kWidthGaussian, beta, false), gd(kWidthDyadic, beta, true);
  NodeTable na = make_nodes(s, gf, ga), nd = make_nodes(s, gf, gd);
  long len = afe_length({&na, &nd});
  if (static_cast<std::size_t>(len) > series.n_max())
    throw std::out_of_range("central_value: coefficient table shorter than the AFE length " + std::to_string(len));

  auto D = dirichlet_table(series.coefficients(), len, t, na.tau, workers);
  cplx root_ratio = std::exp(gf.log_gamma_factor(1.0 - s) - gf.log_gamma_factor(s));
  CentralValue cv;
  cv.gaussian = assemble(na, D, root_ratio);
  cv.dyadic = assemble(nd, D, root_ratio);
  cv.terms = len;
  cv.consistency_gap = std::abs(cv.gaussian - cv.dyadic) / std::abs(cv.gaussian);
  cv.value = smoothing == Smoothing::gaussian ? cv.gaussian : cv.dyadic;
  if (!(cv.consistency_gap <= kInstability))
    throw CentralValueInstability("central_value: smoothings disagree", cv);
  return cv;
}

ExponentScan exponent_scan(const std::vector<double>& t_grid, const RankinSelbergSeries& series,
                           const GammaFactorSpec& gf, int workers) {
  ExponentScan scan;
  scan.rows = parallel_map<ScanRow>(t_grid.size(), workers, [&](std::size_t i) {
    auto start = std::chrono::steady_clock::now();
    ScanRow row;
    row.t = t_grid[i];
    auto cv = central_value(row.t, series, gf, Smoothing::gaussian, 1);
    row.abs_L = std::abs(cv.value);
    row.consistency_gap = cv.consistency_gap;
    double limit = std::min(row.t * row.t, static_cast<double>(series.n_max()));
    for (long N = 1; 2.0 * static_cast<double>(N) <= limit; N *= 2) {
      double ratio = std::abs(partial_sum_S(N, row.t, series, SharpWindow{}, 1)) / std::sqrt(static_cast<double>(N));
      if (ratio > row.sup_ratio) {
        row.sup_ratio = ratio;
        row.argmax_N = N;
      }
    }
    row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
  });
  std::vector<double> lx, ly;
  for (const auto& r : scan.rows) {
    lx.push_back(std::log(r.t));
    ly.push_back(std::log(r.abs_L));
  }
  scan.slope = lx.size() >= 2 ? least_squares_slope(lx, ly) : 0.0;
  return scan;
}

}  // namespace gl2lab
