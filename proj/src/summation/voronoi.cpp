#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "gl2lab/numerics/bessel.hpp"
#include "gl2lab/numerics/compensated.hpp"
#include "gl2lab/numerics/quadrature.hpp"
#include "gl2lab/summation.hpp"

namespace gl2lab {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kTailLimit = 1e-10;

void check_case(const VoronoiCase& c) {
  if (c.q < 1) throw std::invalid_argument("voronoi: q must be >= 1");
  if (!(c.X > 0.0)) throw std::invalid_argument("voronoi: X must be positive");
  if (!c.coefficients.values) throw std::invalid_argument("voronoi: no coefficient table");
  if (c.a == 0 && c.q != 1) throw std::invalid_argument("voronoi: a = 0 is allowed only for q = 1");
  if (gcd64(c.a, c.q) != 1) throw std::invalid_argument("voronoi: gcd(a, q) must be 1");
  if (!(c.V.lo() > 0.0)) throw std::invalid_argument("voronoi: V must be supported in (0, inf)");
}

cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// int V(y) kernel(4 pi sqrt(zy)) dy by composite Gauss-Legendre with enough
// panels to resolve the oscillation of the Bessel argument.
template <class K>
double bessel_transform(const SmoothBump& V, double z, K&& kernel) {
  double a = V.lo(), b = V.hi();
  double cycles = 2.0 * (std::sqrt(z * b) - std::sqrt(z * a));
  int panels = 12 + static_cast<int>(std::ceil(4.0 * cycles));
  double four_pi = 4.0 * std::numbers::pi;
  return gauss_legendre_integrate(
      [&](double y) {
        double v = V(y);
        return v == 0.0 ? 0.0 : v * kernel(four_pi * std::sqrt(z * y));
      },
      a, b, panels);
}

struct ProbeKey {
  int kind, weight;
  double c, w, k, scale, tol;
  bool operator<(const ProbeKey& o) const {
    return std::tie(kind, weight, c, w, k, scale, tol) < std::tie(o.kind, o.weight, o.c, o.w, o.k, o.scale, o.tol);
  }
};

// Smallest probed z beyond which |F_+| + |F_-| stays below tol on a geometric grid.
double decay_threshold(const CoefficientSource& src, const SmoothBump& V, double tol) {
  static std::mutex mu;
  static std::map<ProbeKey, double> cache;
  ProbeKey key{static_cast<int>(src.kind), src.weight, V.center(), V.width(), V.taper(), V.scale(), tol};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double ratio = 1.05;
  const int quiet_needed = 60;
  double z = 1e-3, last_loud = 0.0;
  int quiet = 0;
  while (quiet < quiet_needed) {
    double mag = std::abs(voronoi_kernel_plus(src, V, z)) + std::abs(voronoi_kernel_minus(src, V, z));
    if (mag > tol) {
      last_loud = z;
      quiet = 0;
    } else {
      ++quiet;
    }
    z *= ratio;
    if (z > 1e7) throw VoronoiTruncationError("voronoi: kernels do not decay on the probed range", mag);
  }
  double threshold = last_loud * ratio;
  std::lock_guard<std::mutex> lock(mu);
  cache[key] = threshold;
  return threshold;
}

}  // namespace

CoefficientSource CoefficientSource::holomorphic(const CuspFormData& f) {
  CoefficientSource s;
  s.kind = SequenceKind::eigenform;
  s.weight = f.weight;
  s.values = std::make_shared<const std::vector<double>>(f.lambda);
  return s;
}

CoefficientSource CoefficientSource::divisor(const MultiplicativeSequence& d) {
  CoefficientSource s;
  s.kind = SequenceKind::divisor;
  s.weight = 0;
  s.values = std::make_shared<const std::vector<double>>(d.values);
  return s;
}

SmoothBump default_voronoi_weight() { return SmoothBump(1.5, 0.5, 6.0); }

cplx voronoi_lhs(const VoronoiCase& c) {
  check_case(c);
  auto lo = static_cast<long>(std::floor(c.X * c.V.lo()));
  auto hi = static_cast<long>(std::ceil(c.X * c.V.hi()));
  lo = std::max(lo, 1L);
  const auto& lam = *c.coefficients.values;
  CompensatedComplexSum s;
  for (long n = lo; n <= hi; ++n) {
    double v = c.V(static_cast<double>(n) / c.X);
    if (v == 0.0) continue;
    if (static_cast<std::size_t>(n) >= lam.size())
      throw std::out_of_range("voronoi_lhs: coefficient table does not cover the support of V(n/X)");
    s.add(lam[n] * v * e(static_cast<double>((c.a % c.q) * (n % c.q) % c.q) / static_cast<double>(c.q)));
  }
  return s.value();
}

cplx voronoi_kernel_plus(const CoefficientSource& src, const SmoothBump& V, double z) {
  if (!(z > 0.0)) throw std::invalid_argument("voronoi_kernel: z must be positive");
  if (src.kind == SequenceKind::eigenform) {
    int order = src.weight - 1;
    double r = bessel_transform(V, z, [order](double x) { return bessel_j(order, x); });
    return 2.0 * std::numbers::pi * i_power(src.weight) * r;
  }
  double r = bessel_transform(V, z, [](double x) { return bessel_y0(x); });
  return {-2.0 * std::numbers::pi * r, 0.0};
}

cplx voronoi_kernel_minus(const CoefficientSource& src, const SmoothBump& V, double z) {
  if (!(z > 0.0)) throw std::invalid_argument("voronoi_kernel: z must be positive");
  if (src.kind == SequenceKind::eigenform) return {0.0, 0.0};
  double r = bessel_transform(V, z, [](double x) { return x > 700.0 ? 0.0 : bessel_k0(x); });
  return {4.0 * r, 0.0};
}

long voronoi_default_cutoff(const CoefficientSource& src, const SmoothBump& V, long q, double X, double tail_tol) {
  if (q < 1 || !(X > 0.0)) throw std::invalid_argument("voronoi_default_cutoff: need q >= 1 and X > 0");
  double z = decay_threshold(src, V, tail_tol);
  return std::max(1L, static_cast<long>(std::ceil(z * static_cast<double>(q) * static_cast<double>(q) / X)));
}

VoronoiKernelTable voronoi_kernels(const CoefficientSource& src, const SmoothBump& V, long q, double X, long cutoff) {
  if (cutoff < 1) throw std::invalid_argument("voronoi_kernels: cutoff must be >= 1");
  VoronoiKernelTable t;
  t.q = q;
  t.X = X;
  t.plus.assign(cutoff + 1, 0.0);
  t.minus.assign(cutoff + 1, 0.0);
  double scale = X / (static_cast<double>(q) * static_cast<double>(q));
  for (long n = 1; n <= cutoff; ++n) {
    double z = static_cast<double>(n) * scale;
    t.plus[n] = voronoi_kernel_plus(src, V, z);
    t.minus[n] = voronoi_kernel_minus(src, V, z);
  }
  return t;
}

cplx voronoi_main_term(const VoronoiCase& c) {
  check_case(c);
  if (c.coefficients.kind != SequenceKind::divisor) return {0.0, 0.0};
  double shift = std::log(c.X) + 2.0 * kEulerGamma - 2.0 * std::log(static_cast<double>(c.q));
  double integral =
      gauss_legendre_integrate([&](double y) { return c.V(y) * (std::log(y) + shift); }, c.V.lo(), c.V.hi(), 64);
  return {c.X / static_cast<double>(c.q) * integral, 0.0};
}

VoronoiRhs voronoi_rhs(const VoronoiCase& c, long dual_cutoff) {
  check_case(c);
  return voronoi_rhs(c, voronoi_kernels(c.coefficients, c.V, c.q, c.X, dual_cutoff));
}

VoronoiRhs voronoi_rhs(const VoronoiCase& c, const VoronoiKernelTable& kernels) {
  check_case(c);
  if (kernels.q != c.q || kernels.X != c.X) throw std::invalid_argument("voronoi_rhs: kernel table built for another (q, X)");
  long cutoff = static_cast<long>(kernels.plus.size()) - 1;
  if (cutoff < 1) throw std::invalid_argument("voronoi_rhs: empty kernel table");
  const auto& lam = *c.coefficients.values;
  if (static_cast<std::size_t>(cutoff) >= lam.size())
    throw std::out_of_range("voronoi_rhs: coefficient table shorter than the dual cutoff");

  VoronoiRhs r;
  r.cutoff = cutoff;
  long tail_from = std::max(1L, cutoff - cutoff / 10);
  for (long n = tail_from; n <= cutoff; ++n)
    r.tail_bound = std::max(r.tail_bound, std::abs(kernels.plus[n]) + std::abs(kernels.minus[n]));
  if (!(r.tail_bound <= kTailLimit))
    throw VoronoiTruncationError("voronoi_rhs: dual kernels have not decayed at the cutoff", r.tail_bound);

  long abar = mod_inverse(c.a, c.q);
  CompensatedComplexSum plus, minus;
  for (long n = 1; n <= cutoff; ++n) {
    double frac = static_cast<double>(abar * (n % c.q) % c.q) / static_cast<double>(c.q);
    plus.add(lam[n] * e(-frac) * kernels.plus[n]);
    if (kernels.minus[n] != 0.0) minus.add(lam[n] * e(frac) * kernels.minus[n]);
  }
  double pref = c.X / static_cast<double>(c.q);
  r.dual_plus = pref * plus.value();
  r.dual_minus = pref * minus.value();
  r.main_term = voronoi_main_term(c);
  r.value = r.main_term + r.dual_plus + r.dual_minus;
  return r;
}

}  // namespace gl2lab
