#pragma once

// Prime tables, primality testing, light factorization and modular square
// roots. Everything here is deterministic; the Miller-Rabin witness set
// {2,...,41} is exact below 3.3e24 which covers every input this library
// accepts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "int_types.hpp"

namespace smallexp {

inline std::vector<uint32_t> sieve_primes(uint32_t limit) {
  std::vector<uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(size_t(limit) + 1, false);
  for (uint64_t i = 2; i * i <= limit; ++i)
    if (!composite[i])
      for (uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  for (uint32_t i = 2; i <= limit; ++i)
    if (!composite[i]) out.push_back(i);
  return out;
}

using PrimeList = std::shared_ptr<const std::vector<uint32_t>>;

namespace detail {

// Grow-only shared prime table. Readers hold an immutable snapshot; growth
// swaps in a fresh vector under the mutex.
class PrimeTable {
 public:
  static PrimeTable& instance() {
    static PrimeTable t;
    return t;
  }

  PrimeList upto(uint32_t limit) {
    std::lock_guard<std::mutex> lk(mu_);
    if (limit_ < limit) {
      uint32_t target = std::max<uint64_t>(limit, std::min<uint64_t>(uint64_t(limit_) * 2, 0xffffffffULL));
      primes_ = std::make_shared<const std::vector<uint32_t>>(sieve_primes(target));
      limit_ = target;
    }
    return primes_;
  }

 private:
  PrimeTable()
      : primes_(std::make_shared<const std::vector<uint32_t>>(sieve_primes(1u << 20))),
        limit_(1u << 20) {}
  std::mutex mu_;
  PrimeList primes_;
  uint32_t limit_;
};

}  // namespace detail

// Snapshot of all primes up to at least `limit`, sorted ascending.
inline PrimeList primes_upto(uint32_t limit) { return detail::PrimeTable::instance().upto(limit); }

// n-th prime, 1-based (nth_prime(1) == 2).
inline uint64_t nth_prime(size_t n) {
  if (n == 0) throw std::invalid_argument("nth_prime: index is 1-based");
  uint32_t limit = 1u << 20;
  for (;;) {
    auto ps = primes_upto(limit);
    if (ps->size() >= n) return (*ps)[n - 1];
    limit *= 2;
  }
}

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return uint64_t(uint128(a) * b % m);
}

inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = m > 1 ? 1 : 0;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

inline uint128 mulmod_u128(uint128 a, uint128 b, uint128 m) {
  if ((a | b) >> 64 == 0 && m >> 64 == 0) return mulmod_u64(uint64_t(a), uint64_t(b), uint64_t(m));
  // Schoolbook double-and-add; only reached on rare big-cofactor paths.
  a %= m;
  b %= m;
  uint128 r = 0;
  while (b) {
    if (b & 1) {
      r += a;
      if (r >= m) r -= m;
    }
    a <<= 1;
    if (a >= m) a -= m;
    b >>= 1;
  }
  return r;
}

inline uint128 powmod_u128(uint128 a, uint128 e, uint128 m) {
  uint128 r = m > 1 ? 1 : 0;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u128(r, a, m);
    a = mulmod_u128(a, a, m);
    e >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin, exact for n < 3.3e24.
inline bool is_prime_u128(uint128 n) {
  if (n < 2) return false;
  for (uint32_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  uint128 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (uint32_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}) {
    uint128 x = powmod_u128(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u128(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

inline bool is_prime_u64(uint64_t n) { return is_prime_u128(n); }

inline uint64_t isqrt_u64(uint64_t n) {
  if (n == 0) return 0;
  uint64_t r = uint64_t(std::sqrt(double(n)));
  while (r > 0 && r > n / r) --r;
  while (r + 1 <= n / (r + 1)) ++r;
  return r;
}

inline uint128 isqrt_u128(uint128 n) {
  if (n >> 64 == 0) return isqrt_u64(uint64_t(n));
  uint128 r = (uint128(isqrt_u64(uint64_t(n >> 64))) + 1) << 32;
  for (;;) {  // Newton from a high-half seed
    uint128 q = n / r;
    uint128 nr = (r + q) >> 1;
    if (nr >= r) break;
    r = nr;
  }
  while (r * r > n) --r;
  return r;
}

inline bool is_square_u128(uint128 n, uint128* root = nullptr) {
  uint128 r = isqrt_u128(n);
  if (root) *root = r;
  return r * r == n;
}

inline uint128 gcd_u128(uint128 a, uint128 b) {
  while (b) {
    uint128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Pollard-Brent rho. Returns a non-trivial factor of an odd composite n.
inline uint128 pollard_rho_u128(uint128 n) {
  if (n % 2 == 0) return 2;
  for (uint64_t c = 1;; ++c) {
    uint128 x = 2, saved = 2, d = 1;
    uint64_t power = 1, lam = 0;
    while (d == 1) {
      if (lam == power) {
        saved = x;
        power *= 2;
        lam = 0;
      }
      x = (mulmod_u128(x, x, n) + c) % n;
      ++lam;
      uint128 diff = x > saved ? x - saved : saved - x;
      if (diff == 0) break;
      d = gcd_u128(diff, n);
    }
    if (d != 1 && d != n) return d;
  }
}

// Full factorization, sorted by prime. Trial division then rho on the
// cofactor; intended for one-off inputs, not bulk loops.
inline std::vector<std::pair<uint128, int>> factorize_u128(uint128 n) {
  std::vector<std::pair<uint128, int>> out;
  if (n <= 1) return out;
  auto ps = primes_upto(1u << 16);
  for (uint32_t p : *ps) {
    if (uint128(p) * p > n) break;
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) n /= p, ++e;
      out.emplace_back(p, e);
    }
  }
  std::vector<uint128> stack;
  if (n > 1) stack.push_back(n);
  while (!stack.empty()) {
    uint128 m = stack.back();
    stack.pop_back();
    if (m == 1) continue;
    if (is_prime_u128(m)) {
      bool merged = false;
      for (auto& [p, e] : out)
        if (p == m) {
          ++e;
          merged = true;
          break;
        }
      if (!merged) out.emplace_back(m, 1);
      continue;
    }
    uint128 root;
    if (is_square_u128(m, &root)) {
      stack.push_back(root);
      stack.push_back(root);
      continue;
    }
    uint128 d = pollard_rho_u128(m);
    stack.push_back(d);
    stack.push_back(m / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Tonelli-Shanks: square root of a modulo odd prime p; requires (a/p) != -1.
inline uint64_t sqrt_mod_prime(uint64_t a, uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (p == 2) return a;
  if (powmod_u64(a, (p - 1) / 2, p) != 1)
    throw std::invalid_argument("sqrt_mod_prime: not a quadratic residue");
  if (p % 4 == 3) return powmod_u64(a, (p + 1) / 4, p);
  uint64_t q = p - 1;
  uint64_t s = 0;
  while ((q & 1) == 0) q >>= 1, ++s;
  uint64_t z = 2;
  while (powmod_u64(z, (p - 1) / 2, p) != p - 1) ++z;
  uint64_t m = s;
  uint64_t c = powmod_u64(z, q, p);
  uint64_t t = powmod_u64(a, q, p);
  uint64_t r = powmod_u64(a, (q + 1) / 2, p);
  while (t != 1) {
    uint64_t i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod_u64(tt, tt, p);
      ++i;
    }
    uint64_t b = c;
    for (uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod_u64(b, b, p);
    m = i;
    c = mulmod_u64(b, b, p);
    t = mulmod_u64(t, c, p);
    r = mulmod_u64(r, b, p);
  }
  return r;
}

// Smallest-prime-factor table for fast factorization of form coefficients.
class SpfTable {
 public:
  explicit SpfTable(uint32_t limit) : limit_(limit), spf_(size_t(limit) + 1, 0) {
    for (uint32_t i = 2; i <= limit; ++i) {
      if (spf_[i] == 0)
        for (uint64_t j = i; j <= limit; j += i)
          if (spf_[j] == 0) spf_[j] = i;
    }
  }

  uint32_t limit() const { return limit_; }

  void factor(uint32_t n, std::vector<std::pair<uint32_t, int>>& out) const {
    out.clear();
    while (n > 1) {
      uint32_t p = spf_[n];
      int e = 0;
      while (n % p == 0) n /= p, ++e;
      out.emplace_back(p, e);
    }
  }

 private:
  uint32_t limit_;
  std::vector<uint32_t> spf_;
};

// Shared SPF table sized for class-group work up to |D| <= 3 * (2^20)^2.
inline const SpfTable& spf_table() {
  static SpfTable t(1u << 20);
  return t;
}

}  // namespace smallexp
