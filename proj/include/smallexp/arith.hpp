#pragma once

// Exact integer arithmetic: Kronecker symbols, star discriminants p*,
// fundamental-discriminant recognition and factorization, primorials, CRT.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "int_types.hpp"
#include "primes.hpp"

namespace smallexp {
namespace arith {

namespace detail {

inline uint64_t mod_u64(int64_t v, uint64_t n) {
  int128 r = int128(v) % int128(n);
  if (r < 0) r += int128(n);
  return uint64_t(r);
}

inline uint64_t mod_u64(int128 v, uint64_t n) {
  int128 r = v % int128(n);
  if (r < 0) r += int128(n);
  return uint64_t(r);
}

inline uint64_t mod_u64(const Int& v, uint64_t n) {
  Int r = v % n;
  if (r < 0) r += n;
  return uint64_t(r);
}

// Jacobi symbol (a/n) for odd n >= 1, 0 <= a < n.
inline int jacobi_u64(uint64_t a, uint64_t n) {
  int t = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      uint64_t r = n & 7;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) t = -t;
    a %= n;
  }
  return n == 1 ? t : 0;
}

template <class T>
bool is_odd_value(const T& v) {
  if constexpr (std::is_same_v<T, Int>)
    return bit_test(v, 0);
  else
    return (v & 1) != 0;
}

}  // namespace detail

// Kronecker symbol (D/n), completely multiplicative in n, defined for every
// integer D and n >= 0.
template <class T>
int kronecker(const T& D, uint64_t n) {
  if (n == 0) return (D == 1 || D == -1) ? 1 : 0;
  int sign = 1;
  if ((n & 1) == 0) {
    if (!detail::is_odd_value(D)) return 0;
    uint64_t m8 = detail::mod_u64(D, 8);
    int two = (m8 == 1 || m8 == 7) ? 1 : -1;
    int v2 = 0;
    while ((n & 1) == 0) n >>= 1, ++v2;
    if (v2 & 1) sign = two;
  }
  if (n == 1) return sign;
  return sign * detail::jacobi_u64(detail::mod_u64(D, n), n);
}

namespace detail {

// Jacobi symbol on big operands, 0 <= a < n, n odd.
inline int jacobi_int(Int a, Int n) {
  int t = 1;
  while (a != 0) {
    while (!bit_test(a, 0)) {
      a >>= 1;
      uint64_t r = uint64_t(n & 7);
      if (r == 3 || r == 5) t = -t;
    }
    a.swap(n);
    if (uint64_t(a & 3) == 3 && uint64_t(n & 3) == 3) t = -t;
    a %= n;
  }
  return n == 1 ? t : 0;
}

}  // namespace detail

// Kronecker symbol with an arbitrary-precision second argument.
inline int kronecker_int(const Int& D, const Int& n_in) {
  if (n_in < 0) throw std::invalid_argument("kronecker_int: n must be non-negative");
  if ((n_in >> 64) == 0) return kronecker(D, uint64_t(n_in));
  Int n = n_in;
  int sign = 1;
  if (!bit_test(n, 0)) {
    if (!detail::is_odd_value(D)) return 0;
    uint64_t m8 = detail::mod_u64(D, 8);
    int two = (m8 == 1 || m8 == 7) ? 1 : -1;
    int v2 = 0;
    while (!bit_test(n, 0)) n >>= 1, ++v2;
    if (v2 & 1) sign = two;
  }
  if (n == 1) return sign;
  Int a = D % n;
  if (a < 0) a += n;
  return sign * detail::jacobi_int(a, n);
}

// Prime fundamental discriminant attached to p: (-1)^((p-1)/2) * p for odd p,
// one of {-4, -8, 8} for p = 2.
struct PrimeStarDisc {
  Int value;
  Int prime;
};

inline int64_t star_of_odd_prime(uint64_t p) {
  return (p % 4 == 1) ? int64_t(p) : -int64_t(p);
}

inline PrimeStarDisc star(const Int& p, std::optional<int> two_variant = std::nullopt) {
  if (p == 2) {
    if (!two_variant) throw std::invalid_argument("star: p = 2 needs a selector from {-4,-8,8}");
    int v = *two_variant;
    if (v != -4 && v != -8 && v != 8)
      throw std::invalid_argument("star: selector must be one of -4, -8, 8");
    return {Int(v), Int(2)};
  }
  if (two_variant) throw std::invalid_argument("star: selector only valid for p = 2");
  if (p < 3 || !is_prime_u128(to_uint128(p))) throw std::invalid_argument("star: p must be prime");
  Int v = (p % 4 == 1) ? p : -p;
  return {v, p};
}

struct FundamentalDiscriminant {
  Int d;
  std::vector<PrimeStarDisc> factors;  // strictly increasing primes
  int omega = 0;
};

namespace detail {

inline uint64_t icbrt_u128(uint128 v) {
  uint64_t r = uint64_t(std::cbrt(double(v)));
  while (r > 0 && uint128(r) * r * r > v) --r;
  while (uint128(r + 1) * (r + 1) * (r + 1) <= v) ++r;
  return r;
}

// Squarefree test for 0 < v < 1e21: trial division up to cbrt(v), after which
// the cofactor has at most two prime factors and is non-squarefree only if it
// is a perfect square.
inline bool is_squarefree_u128(uint128 v) {
  if (v == 0) return false;
  if (v >= uint128(1000000000ULL) * uint128(1000000000000ULL))
    throw std::invalid_argument("squarefree test limited to |v| < 1e21");
  uint64_t bound = icbrt_u128(v) + 1;
  auto ps = primes_upto(uint32_t(bound));
  for (uint32_t p : *ps) {
    if (uint128(p) * p * p > v) break;
    if (v % p == 0) {
      v /= p;
      if (v % p == 0) return false;
    }
  }
  return v == 1 || !is_square_u128(v);
}

}  // namespace detail

// True iff d is the discriminant of a quadratic field: d ≡ 1 mod 4 and
// squarefree, or d = 4m with m squarefree and m ≡ 2,3 mod 4.
inline bool is_fundamental(const Int& d) {
  if (d == 0 || d == 1) return false;
  Int ad = abs(d);
  uint64_t m4 = detail::mod_u64(d, 4);
  if (m4 == 1) return detail::is_squarefree_u128(to_uint128(ad));
  if (m4 != 0) return false;
  Int q = d / 4;
  uint64_t qm4 = detail::mod_u64(q, 4);
  if (qm4 != 2 && qm4 != 3) return false;
  return detail::is_squarefree_u128(to_uint128(abs(q)));
}

// Unique factorization of a fundamental discriminant into prime star
// discriminants, primes strictly increasing.
inline FundamentalDiscriminant factor_fundamental(const Int& d) {
  if (!is_fundamental(d)) throw std::invalid_argument("factor_fundamental: not fundamental");
  FundamentalDiscriminant out;
  out.d = d;
  uint128 ad = to_uint128(abs(d));
  auto fac = factorize_u128(ad);
  Int odd_product = 1;
  std::vector<PrimeStarDisc> odd_stars;
  for (auto& [p, e] : fac) {
    if (p == 2) continue;
    Int star_v = (p % 4 == 1) ? to_int(p) : -to_int(p);
    odd_stars.push_back({star_v, to_int(p)});
    odd_product *= star_v;
  }
  Int two_part = d / odd_product;
  if (two_part != 1) {
    if (two_part != -4 && two_part != -8 && two_part != 8)
      throw std::logic_error("factor_fundamental: bad 2-part");
    out.factors.push_back({two_part, Int(2)});
  }
  for (auto& s : odd_stars) out.factors.push_back(s);
  out.omega = int(out.factors.size());
  Int check = 1;
  for (auto& f : out.factors) check *= f.value;
  if (check != d) throw std::logic_error("factor_fundamental: product mismatch");
  return out;
}

// Fundamental discriminant of Q(sqrt(d)) for any non-square d != 0.
inline Int fundamentalize(const Int& d) {
  if (d == 0) throw std::invalid_argument("fundamentalize: d = 0");
  uint128 ad = to_uint128(abs(d));
  auto fac = factorize_u128(ad);
  Int m = d < 0 ? -1 : 1;
  for (auto& [p, e] : fac)
    if (e & 1) m *= to_int(p);
  if (m == 1) throw std::invalid_argument("fundamentalize: d is a perfect square");
  uint64_t m4 = detail::mod_u64(m, 4);
  return m4 == 1 ? m : 4 * m;
}

// d_n = product of the first n primes.
inline Int primorial(unsigned n) {
  if (n < 1) throw std::invalid_argument("primorial: n >= 1 required");
  Int r = 1;
  uint32_t limit = 64;
  for (;;) {
    auto ps = primes_upto(limit);
    if (ps->size() >= n) {
      for (size_t i = 0; i < n; ++i) r *= (*ps)[i];
      return r;
    }
    limit *= 4;
  }
}

inline void xgcd(const Int& a, const Int& b, Int& g, Int& x, Int& y) {
  Int old_r = a, r = b, old_x = 1, xx = 0, old_y = 0, yy = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_x - q * xx;
    old_x = xx;
    xx = t;
    t = old_y - q * yy;
    old_y = yy;
    yy = t;
  }
  g = old_r;
  x = old_x;
  y = old_y;
  if (g < 0) {
    g = -g;
    x = -x;
    y = -y;
  }
}

// Chinese remainder theorem: unique representative in [0, prod of moduli).
// Throws on non-coprime moduli.
inline Int crt(const std::vector<std::pair<Int, Int>>& residues) {
  Int x = 0, M = 1;
  for (auto& [r, m] : residues) {
    if (m < 1) throw std::invalid_argument("crt: modulus must be positive");
    Int g, u, v;
    xgcd(M, m, g, u, v);
    if (g != 1) throw std::invalid_argument("crt: moduli not pairwise coprime");
    // x' = x + M * ((r - x) * u mod m)
    Int t = ((r - x) % m) * u % m;
    if (t < 0) t += m;
    x += M * t;
    M *= m;
    x %= M;
    if (x < 0) x += M;
  }
  return x;
}

// Per-value squarefree flags for v in [lo, hi), segmented.
inline std::vector<uint8_t> squarefree_window(uint64_t lo, uint64_t hi) {
  std::vector<uint8_t> flags(hi - lo, 1);
  if (lo == 0 && hi > 0) flags[0] = 0;
  uint64_t root = isqrt_u64(hi > 0 ? hi - 1 : 0);
  auto ps = primes_upto(uint32_t(std::min<uint64_t>(root, 0xfffffffeULL)));
  for (uint32_t p : *ps) {
    uint64_t p2 = uint64_t(p) * p;
    if (p2 >= hi) break;
    uint64_t start = (lo + p2 - 1) / p2 * p2;
    for (uint64_t v = start; v < hi; v += p2) flags[v - lo] = 0;
  }
  return flags;
}

// Flags for |D| in [lo, hi): 1 iff -|D| is a fundamental discriminant.
inline std::vector<uint8_t> fundamental_window(uint64_t lo, uint64_t hi) {
  std::vector<uint8_t> flags(hi - lo, 0);
  auto sf = squarefree_window(lo, hi);
  uint64_t qlo = lo / 4, qhi = (hi + 3) / 4;
  auto sfq = squarefree_window(qlo, qhi);
  for (uint64_t v = lo; v < hi; ++v) {
    uint64_t m16 = v & 15;
    if ((v & 3) == 3)
      flags[v - lo] = sf[v - lo];
    else if (m16 == 4 || m16 == 8)
      flags[v - lo] = sfq[v / 4 - qlo];
  }
  return flags;
}

// Number of distinct prime factors for each v in [lo, hi), segmented.
inline std::vector<uint8_t> omega_window(uint64_t lo, uint64_t hi) {
  size_t n = hi - lo;
  std::vector<uint8_t> omega(n, 0);
  std::vector<uint64_t> rem(n);
  for (size_t i = 0; i < n; ++i) rem[i] = lo + i;
  uint64_t root = isqrt_u64(hi > 0 ? hi - 1 : 0);
  auto ps = primes_upto(uint32_t(std::min<uint64_t>(root, 0xfffffffeULL)));
  for (uint32_t p : *ps) {
    if (uint64_t(p) > root) break;
    uint64_t start = (lo + p - 1) / p * p;
    for (uint64_t v = start; v < hi; v += p) {
      size_t i = v - lo;
      ++omega[i];
      while (rem[i] % p == 0) rem[i] /= p;
    }
  }
  for (size_t i = 0; i < n; ++i)
    if (rem[i] > 1) ++omega[i];
  return omega;
}

}  // namespace arith
}  // namespace smallexp
