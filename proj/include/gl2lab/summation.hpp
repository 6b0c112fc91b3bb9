#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "gl2lab/arith.hpp"
#include "gl2lab/numerics/bump.hpp"

namespace gl2lab {

using cplx = std::complex<double>;

// Coefficients for the Voronoi formula: a holomorphic eigenform of weight k
// (normalised lambda) or the divisor function.
struct CoefficientSource {
  SequenceKind kind = SequenceKind::eigenform;
  int weight = 12;
  std::shared_ptr<const std::vector<double>> values;  // index 0 unused

  static CoefficientSource holomorphic(const CuspFormData& f);
  static CoefficientSource divisor(const MultiplicativeSequence& d);
  std::size_t n_max() const { return values ? values->size() - 1 : 0; }
};

struct VoronoiCase {
  CoefficientSource coefficients;
  long a = 0;
  long q = 1;
  double X = 1.0;
  SmoothBump V;
};

// Default Voronoi test function: taper-6 mollifier on [1, 2].
SmoothBump default_voronoi_weight();

// sum_n lambda(n) e(na/q) V(n/X)
cplx voronoi_lhs(const VoronoiCase& c);

// Dual kernels F_+(z), F_-(z) at z = nX/q^2, n = 1..cutoff.
struct VoronoiKernelTable {
  long q = 1;
  double X = 1.0;
  std::vector<cplx> plus, minus;  // index n (0 unused)
};
VoronoiKernelTable voronoi_kernels(const CoefficientSource& src, const SmoothBump& V, long q, double X, long cutoff);

// Holomorphic: F_+(z) = 2 pi i^k int V(y) J_{k-1}(4 pi sqrt(zy)) dy, F_- = 0.
// Divisor:     F_+(z) = -2 pi int V(y) Y_0(4 pi sqrt(zy)) dy, F_-(z) = 4 int V(y) K_0(4 pi sqrt(zy)) dy.
cplx voronoi_kernel_plus(const CoefficientSource& src, const SmoothBump& V, double z);
cplx voronoi_kernel_minus(const CoefficientSource& src, const SmoothBump& V, double z);

// Smallest cutoff n with |F_+(z)| + |F_-(z)| <= tail_tol for every probed z >= nX/q^2.
long voronoi_default_cutoff(const CoefficientSource& src, const SmoothBump& V, long q, double X,
                            double tail_tol = 1e-12);

struct VoronoiRhs {
  cplx value;
  cplx main_term;
  cplx dual_plus;
  cplx dual_minus;
  long cutoff = 0;
  double tail_bound = 0.0;  // max |F_+| + |F_-| over the last tenth of the dual range
};

// Thrown when the kernels have not decayed below 1e-10 at the requested cutoff.
class VoronoiTruncationError : public std::runtime_error {
 public:
  VoronoiTruncationError(const std::string& what, double bound) : std::runtime_error(what), bound_(bound) {}
  double achieved_bound() const { return bound_; }

 private:
  double bound_;
};

// Divisor main term (X/q) int V(y) (log(Xy) + 2 gamma - 2 log q) dy; 0 for cusp forms.
cplx voronoi_main_term(const VoronoiCase& c);

VoronoiRhs voronoi_rhs(const VoronoiCase& c, long dual_cutoff);
VoronoiRhs voronoi_rhs(const VoronoiCase& c, const VoronoiKernelTable& kernels);

struct PoissonCase {
  SmoothBump W;
  long a = 0;
  long q = 1;
  double X = 1.0;
  bool derivative_weight = false;  // use W' (a zero-mean weight) instead of W
};

// Default Poisson weight: taper-9 mollifier on [1, 3].
SmoothBump default_poisson_weight();

double poisson_weight(const PoissonCase& c, double x);
// W-hat(xi) = int W(x) e(-x xi) dx
cplx poisson_fourier(const PoissonCase& c, double xi);

struct PoissonResult {
  cplx lhs;
  cplx rhs;
  long dual_terms = 0;
};
PoissonResult poisson_two_sided(const PoissonCase& c);

struct DualTerm {
  long m = 0;
  double magnitude = 0.0;  // |X W-hat(mX/q)|: the size the term has when m = -a mod q
  bool congruent = false;  // m = -a mod q, the only classes the alpha-sum keeps
};
// Dual-term magnitudes for |m| up to the point where W-hat reaches its rounding floor.
std::vector<DualTerm> dual_truncation_profile(const PoissonCase& c);

}  // namespace gl2lab
