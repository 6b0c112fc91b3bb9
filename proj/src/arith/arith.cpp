#include "gl2lab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "gl2lab/numerics/compensated.hpp"

namespace gl2lab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = static_cast<u64>(static_cast<u128>(r) * b % m);
    b = static_cast<u64>(static_cast<u128>(b) * b % m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u32(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (u64 a : {2ull, 7ull, 61ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = static_cast<u64>(static_cast<u128>(x) * x % n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Coefficients of (sum_k (-1)^k (2k+1) q^{k(k+1)/2})^8 modulo p, indices 0..len-1.
std::vector<std::uint32_t> eta_cubed_power_mod(std::size_t len, u64 p) {
  std::vector<u64> tri, jb, bk;
  for (u64 k = 1;; ++k) {
    u64 j = k * (k + 1) / 2;
    if (j >= len) break;
    u64 b = (2 * k + 1) % p;
    if (k % 2 == 1) b = (p - b) % p;
    tri.push_back(j);
    bk.push_back(b);
    jb.push_back(static_cast<u64>(static_cast<u128>(j % p) * b % p));
  }
  std::vector<std::uint32_t> inv(len + 1, 0);
  if (len > 1) inv[1] = 1;
  for (std::size_t i = 2; i < len; ++i)
    inv[i] = static_cast<std::uint32_t>((p - (p / i) * inv[p % i] % p) % p);
  std::vector<std::uint32_t> a(len, 0);
  a[0] = 1;
  // n a_n = sum_j ((e+1) j - n) b_j a_{n-j} with e = 8
  for (std::size_t n = 1; n < len; ++n) {
    u128 s1 = 0, s2 = 0;
    for (std::size_t k = 0; k < tri.size() && tri[k] <= n; ++k) {
      u64 an = a[n - tri[k]];
      s1 += static_cast<u128>(jb[k] * an);
      s2 += static_cast<u128>(bk[k] * an);
    }
    u64 r1 = static_cast<u64>(s1 % p), r2 = static_cast<u64>(s2 % p);
    u64 v = (9 * r1 % p + p - static_cast<u64>(static_cast<u128>(n % p) * r2 % p)) % p;
    a[n] = static_cast<std::uint32_t>(static_cast<u128>(v) * inv[n] % p);
  }
  return a;
}

std::int64_t moebius_small(std::int64_t n) {
  int sign = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      sign = -sign;
    }
  }
  if (n > 1) sign = -sign;
  return sign;
}

}  // namespace

const BigInt& CuspFormData::a(std::size_t n) const {
  if (n == 0 || n >= raw.size()) throw std::out_of_range("CuspFormData: index outside table");
  return raw[n];
}

double CuspFormData::lam(std::size_t n) const {
  if (n == 0 || n >= lambda.size()) throw std::out_of_range("CuspFormData: index outside table");
  return lambda[n];
}

Sieve::Sieve(std::size_t n_max) {
  std::size_t n = std::max<std::size_t>(n_max, 1);
  spf.assign(n + 1, 0);
  mu.assign(n + 1, 0);
  phi.assign(n + 1, 0);
  d.assign(n + 1, 0);
  std::vector<std::uint8_t> e(n + 1, 0);
  mu[1] = 1;
  phi[1] = 1;
  d[1] = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
      mu[i] = -1;
      phi[i] = static_cast<std::uint32_t>(i - 1);
      d[i] = 2;
      e[i] = 1;
    }
    for (std::uint32_t p : primes) {
      std::size_t ip = i * p;
      if (p > spf[i] || ip > n) break;
      spf[ip] = p;
      if (p == spf[i]) {
        mu[ip] = 0;
        phi[ip] = phi[i] * p;
        e[ip] = static_cast<std::uint8_t>(e[i] + 1);
        d[ip] = d[i] / (e[i] + 1) * (e[i] + 2);
      } else {
        mu[ip] = static_cast<std::int8_t>(-mu[i]);
        phi[ip] = phi[i] * (p - 1);
        e[ip] = 1;
        d[ip] = d[i] * 2;
      }
    }
  }
}

CuspFormData generate_delta_coefficients(std::size_t n_max) {
  if (n_max < 1) throw std::invalid_argument("generate_delta_coefficients: n_max must be >= 1");
  Sieve sv(n_max);
  std::uint32_t dmax = 1;
  for (std::size_t n = 1; n <= n_max; ++n) dmax = std::max(dmax, sv.d[n]);
  // |tau(n)| <= d(n) n^{11/2}; the CRT modulus must exceed twice that.
  double bits = std::log2(static_cast<double>(dmax)) + 5.5 * std::log2(static_cast<double>(n_max)) + 2.0;
  std::vector<u64> primes;
  double have = 0.0;
  for (u64 c = (1ull << 31) - 1; have < bits + 8.0; c -= 2) {
    if (c <= n_max + 1) throw std::overflow_error("generate_delta_coefficients: modulus capacity exhausted");
    if (is_prime_u32(c)) {
      primes.push_back(c);
      have += std::log2(static_cast<double>(c));
    }
  }
  std::vector<std::vector<std::uint32_t>> res;
  for (u64 p : primes) res.push_back(eta_cubed_power_mod(n_max, p));

  // Garner mixed-radix coefficients.
  std::size_t k = primes.size();
  std::vector<std::vector<u64>> inv(k, std::vector<u64>(k, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < i; ++j) inv[j][i] = powmod(primes[j] % primes[i], primes[i] - 2, primes[i]);
  BigInt modulus = 1;
  for (u64 p : primes) modulus *= p;
  BigInt half = modulus / 2;

  CuspFormData f;
  f.weight = 12;
  f.raw.assign(n_max + 1, 0);
  f.lambda.assign(n_max + 1, 0.0);
  std::vector<u64> c(k);
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (std::size_t i = 0; i < k; ++i) {
      u64 p = primes[i];
      u64 x = res[i][n - 1];
      for (std::size_t j = 0; j < i; ++j) {
        x = (x + p - c[j] % p) % p;
        x = static_cast<u64>(static_cast<u128>(x) * inv[j][i] % p);
      }
      c[i] = x;
    }
    BigInt v = c[k - 1];
    for (std::size_t i = k - 1; i-- > 0;) v = v * primes[i] + c[i];
    if (v > half) v -= modulus;
    double nd = static_cast<double>(n);
    double lam = v.convert_to<double>() / (std::pow(nd, 5) * std::sqrt(nd));
    if (!(std::fabs(lam) <= sv.d[n] * (1.0 + 1e-9)))
      throw std::overflow_error("generate_delta_coefficients: reconstructed coefficient violates the Deligne bound");
    f.raw[n] = std::move(v);
    f.lambda[n] = lam;
  }
  return f;
}

MultiplicativeSequence divisor_sequence(std::size_t n_max) {
  if (n_max < 1) throw std::invalid_argument("divisor_sequence: n_max must be >= 1");
  Sieve sv(n_max);
  MultiplicativeSequence s;
  s.kind = SequenceKind::divisor;
  s.values.assign(n_max + 1, 0.0);
  for (std::size_t n = 1; n <= n_max; ++n) s.values[n] = sv.d[n];
  return s;
}

MultiplicativeSequence as_sequence(const CuspFormData& f) {
  MultiplicativeSequence s;
  s.kind = SequenceKind::eigenform;
  s.values = f.lambda;
  return s;
}

bool hecke_relation_check(const CuspFormData& f, std::uint64_t m, std::uint64_t n) {
  if (m == 0 || n == 0) throw std::out_of_range("hecke_relation_check: indices must be positive");
  if (static_cast<u128>(m) * n > f.n_max()) throw std::out_of_range("hecke_relation_check: mn exceeds the table");
  std::uint64_t g = static_cast<std::uint64_t>(gcd64(static_cast<std::int64_t>(m), static_cast<std::int64_t>(n)));
  BigInt rhs = 0;
  for (std::uint64_t d = 1; d <= g; ++d) {
    if (g % d) continue;
    BigInt dk = boost::multiprecision::pow(BigInt(d), f.weight - 1);
    rhs += dk * f.a(m * n / (d * d));
  }
  return f.a(m) * f.a(n) == rhs;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t q) {
  if (q < 1) throw std::invalid_argument("mod_inverse: modulus must be positive");
  if (q == 1) return 0;
  std::int64_t r0 = q, r1 = ((a % q) + q) % q, s0 = 0, s1 = 1;
  while (r1) {
    std::int64_t t = r0 / r1;
    std::int64_t r2 = r0 - t * r1;
    r0 = r1;
    r1 = r2;
    std::int64_t s2 = s0 - t * s1;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) throw std::invalid_argument("mod_inverse: arguments not coprime");
  return ((s0 % q) + q) % q;
}

std::vector<std::int64_t> ramanujan_sums(std::int64_t q, std::int64_t m_lo, std::int64_t m_hi) {
  if (q < 1) throw std::invalid_argument("ramanujan_sum: q must be >= 1");
  std::vector<double> cs(q), sn(q);
  for (std::int64_t r = 0; r < q; ++r) {
    double ang = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(q);
    cs[r] = std::cos(ang);
    sn[r] = std::sin(ang);
  }
  std::vector<std::int64_t> units, divisors;
  for (std::int64_t a = 1; a <= q; ++a) {
    if (gcd64(a, q) == 1) units.push_back(a % q);
    if (q % a == 0) divisors.push_back(a);
  }
  std::vector<std::int64_t> mus;
  for (auto d : divisors) mus.push_back(moebius_small(q / d));
  std::vector<std::int64_t> out;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    std::int64_t mr = ((m % q) + q) % q;
    double re = 0.0, im = 0.0;
    for (auto a : units) {
      std::int64_t r = (a * mr) % q;
      re += cs[r];
      im += sn[r];
    }
    double rounded = std::nearbyint(re);
    if (std::fabs(im) > 1e-9 || std::fabs(re - rounded) > 1e-6)
      throw std::logic_error("ramanujan_sum: direct sum is not a real integer");
    std::int64_t formula = 0;
    for (std::size_t i = 0; i < divisors.size(); ++i)
      if (m % divisors[i] == 0) formula += divisors[i] * mus[i];
    auto direct = static_cast<std::int64_t>(rounded);
    if (direct != formula) throw std::logic_error("ramanujan_sum: direct and divisor-Moebius evaluations disagree");
    out.push_back(direct);
  }
  return out;
}

std::int64_t ramanujan_sum_direct(std::int64_t q, std::int64_t m) {
  if (q < 1) throw std::invalid_argument("ramanujan_sum: q must be >= 1");
  std::int64_t mr = ((m % q) + q) % q;
  double re = 0.0, im = 0.0;
  for (std::int64_t a = 1; a <= q; ++a) {
    if (gcd64(a, q) != 1) continue;
    std::int64_t r = (a % q) * mr % q;
    double ang = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(q);
    re += std::cos(ang);
    im += std::sin(ang);
  }
  double rounded = std::nearbyint(re);
  if (std::fabs(im) > 1e-9 || std::fabs(re - rounded) > 1e-6)
    throw std::logic_error("ramanujan_sum: direct sum is not a real integer");
  return static_cast<std::int64_t>(rounded);
}

std::int64_t ramanujan_sum_formula(std::int64_t q, std::int64_t m) {
  if (q < 1) throw std::invalid_argument("ramanujan_sum: q must be >= 1");
  std::int64_t g = gcd64(q, m), total = 0;
  for (std::int64_t d = 1; d <= g; ++d)
    if (g % d == 0) total += d * moebius_small(q / d);
  return total;
}

std::int64_t ramanujan_sum(std::int64_t q, std::int64_t m) {
  auto a = ramanujan_sum_direct(q, m);
  auto b = ramanujan_sum_formula(q, m);
  if (a != b) throw std::logic_error("ramanujan_sum: direct and divisor-Moebius evaluations disagree");
  return a;
}

std::size_t deligne_violations(const CuspFormData& f, std::size_t n_max) {
  if (n_max > f.n_max()) throw std::out_of_range("deligne_violations: n_max exceeds the table");
  Sieve sv(std::max<std::size_t>(n_max, 1));
  std::size_t bad = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    BigInt lhs = f.raw[n] * f.raw[n];
    BigInt rhs = BigInt(sv.d[n]) * sv.d[n] * boost::multiprecision::pow(BigInt(n), f.weight - 1);
    if (lhs > rhs) ++bad;
  }
  return bad;
}

double rankin_selberg_average(const std::vector<double>& values, double x) {
  if (values.empty() || x > static_cast<double>(values.size() - 1))
    throw std::out_of_range("rankin_selberg_average: x exceeds the table");
  CompensatedSum s;
  for (std::size_t n = 1; static_cast<double>(n) <= x; ++n) s.add(values[n] * values[n]);
  return s.value();
}

void write_coefficients_csv(std::ostream& os, const CuspFormData& f) {
  os << "n,a_n,lambda_n\n";
  auto old = os.precision(17);
  for (std::size_t n = 1; n <= f.n_max(); ++n) os << n << ',' << f.raw[n] << ',' << f.lambda[n] << '\n';
  os.precision(old);
}

}  // namespace gl2lab
