#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gl2lab {

using BigInt = boost::multiprecision::cpp_int;

// Level-1 holomorphic Hecke eigenform: raw integer coefficients a(n) and the
// normalised eigenvalues lambda(n) = a(n) / n^{(k-1)/2}. Index 0 is unused.
struct CuspFormData {
  int weight = 12;
  std::vector<BigInt> raw;
  std::vector<double> lambda;

  std::size_t n_max() const { return raw.empty() ? 0 : raw.size() - 1; }
  const BigInt& a(std::size_t n) const;
  double lam(std::size_t n) const;
};

enum class SequenceKind { eigenform, divisor };

struct MultiplicativeSequence {
  SequenceKind kind = SequenceKind::divisor;
  std::vector<double> values;  // index 0 unused

  std::size_t n_max() const { return values.empty() ? 0 : values.size() - 1; }
  double operator[](std::size_t n) const { return values.at(n); }
};

// Ramanujan's tau(n) for n <= n_max from q prod (1 - q^m)^24.
CuspFormData generate_delta_coefficients(std::size_t n_max);

MultiplicativeSequence divisor_sequence(std::size_t n_max);
MultiplicativeSequence as_sequence(const CuspFormData& f);

// Linear sieve: smallest prime factor, Moebius, Euler phi, number of divisors.
struct Sieve {
  std::vector<std::uint32_t> spf;
  std::vector<std::int8_t> mu;
  std::vector<std::uint32_t> phi;
  std::vector<std::uint32_t> d;
  std::vector<std::uint32_t> primes;
  explicit Sieve(std::size_t n_max);
  std::size_t n_max() const { return spf.size() - 1; }
};

// a(m) a(n) == sum_{d | (m,n)} d^{k-1} a(mn/d^2), exactly. Requires mn <= n_max.
bool hecke_relation_check(const CuspFormData& f, std::uint64_t m, std::uint64_t n);

// R_q(m) as a complete exponential sum over units mod q; throws if the
// imaginary residue exceeds 1e-9 or the real part is not near an integer.
std::int64_t ramanujan_sum_direct(std::int64_t q, std::int64_t m);
// R_q(m) = sum_{d | (q, m)} d mu(q/d).
std::int64_t ramanujan_sum_formula(std::int64_t q, std::int64_t m);
// Both evaluations; std::logic_error if they disagree.
std::int64_t ramanujan_sum(std::int64_t q, std::int64_t m);

// All R_q(m) for one q and m in [m_lo, m_hi], both ways, with the e(r/q)
// table shared across m. Throws std::logic_error on disagreement.
std::vector<std::int64_t> ramanujan_sums(std::int64_t q, std::int64_t m_lo, std::int64_t m_hi);

// Number of n <= n_max with a(n)^2 > d(n)^2 n^{k-1}, in exact integers.
std::size_t deligne_violations(const CuspFormData& f, std::size_t n_max);

// sum_{n <= x} |v(n)|^2
double rankin_selberg_average(const std::vector<double>& values, double x);

// CSV with columns n,a_n,lambda_n.
void write_coefficients_csv(std::ostream& os, const CuspFormData& f);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
// Inverse of a modulo q (q >= 1, gcd(a, q) = 1); 0 when q == 1.
std::int64_t mod_inverse(std::int64_t a, std::int64_t q);

}  // namespace gl2lab
