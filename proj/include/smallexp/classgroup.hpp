#pragma once

// Class groups of imaginary quadratic fields through reduced forms.
//
// Three engines with different cost profiles:
//  - reduced_forms / class_number: per-discriminant enumeration that solves
//    b^2 = D (mod 4a) prime-by-prime (Tonelli-Shanks + Hensel + CRT), cost
//    ~O(|D|^(1/2+eps)).
//  - exponent_bounded: generator scan over prime forms up to the reduction
//    bound sqrt(|D|/3); decides E(D) <= cap (or E | c) with early aborts.
//    This is the fast path of the searches.
//  - scan_reduced_forms: shared sweep over (a, b, c) producing the forms of
//    every discriminant in a window at once; the bulk oracle for tests.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "arith.hpp"
#include "int_types.hpp"
#include "primes.hpp"
#include "quadforms.hpp"

namespace smallexp {
namespace classgroup {

using quadforms::Form64;

struct ClassGroupInfo {
  uint64_t h = 1;
  std::vector<uint64_t> divisors;  // elementary divisors n_1 | n_2 | ... | n_s
  uint64_t exponent = 1;
  int two_rank = 0;
};

namespace detail {

// Hensel lift: from x^2 = M (mod p^k) with p odd, p not dividing x, to p^(k+1).
inline uint64_t hensel_step(uint64_t x, uint64_t M, uint64_t p, uint64_t pk, uint64_t pk1) {
  uint64_t fx = uint64_t((uint128(x) * x + pk1 - M % pk1) % pk1);
  uint64_t h = (fx / pk) % p;
  // solve h + 2x * t = 0 (mod p)
  uint64_t inv2x = powmod_u64(2 * x % p, p - 2, p);
  uint64_t t = (p - h) % p;
  t = mulmod_u64(t, inv2x, p);
  return (x + t % p * pk) % pk1;
}

// Roots of x^2 = M (mod p^e), p odd prime not dividing M; exactly two.
inline void sqrt_mod_odd_power(uint64_t M, uint64_t p, int e, uint64_t root_mod_p,
                               uint64_t& r0, uint64_t& r1) {
  uint64_t pk = p, x = root_mod_p;
  for (int k = 1; k < e; ++k) {
    uint64_t pk1 = pk * p;
    x = hensel_step(x, M % pk1, p, pk, pk1);
    pk = pk1;
  }
  r0 = x;
  r1 = pk - x;
}

// Per-discriminant solver for b^2 = D (mod 4a) with b = 2t + delta.
class FormSolver {
 public:
  explicit FormSolver(int64_t D) : D_(D), absD_(uint64_t(-D)), delta_(uint64_t(absD_ & 1)) {
    if (D >= 0) throw std::invalid_argument("FormSolver: D must be negative");
    if (delta_) {
      // D odd; split at 2 iff D = 1 (mod 8), i.e. |D| = 7 (mod 8)
      two_split_ = (absD_ % 8 == 7);
    } else {
      if (absD_ % 4 != 0) throw std::invalid_argument("FormSolver: D = 2, 3 (mod 4)");
      m_abs_ = absD_ / 4;
    }
  }

  int64_t D() const { return D_; }
  uint64_t absD() const { return absD_; }

  // Number of t in [0, a) with b = 2t + delta, b^2 = D (mod 4a). No root
  // extraction, only Kronecker evaluations.
  int count_roots(uint32_t a, std::vector<std::pair<uint32_t, int>>& fac_buf) const {
    const auto& spf = spf_table();
    spf.factor(a, fac_buf);
    int count = 1;
    for (auto& [p, e] : fac_buf) {
      if (p == 2) {
        if (delta_) {
          if (!two_split_) return 0;
          count *= 2;
        } else {
          if (e >= 2) return 0;
          // t^2 = m (mod 2) always has exactly one root
        }
        continue;
      }
      int k = arith::kronecker(int64_t(D_), p);
      if (k == -1) return 0;
      if (k == 0) {
        if (e >= 2) return 0;  // fundamental D: p^2 never divides
      } else {
        count *= 2;
      }
    }
    return count;
  }

  // Materialize all admissible b in (-a, a]. Returns false if none.
  bool roots(uint32_t a, std::vector<int64_t>& out_b, std::vector<std::pair<uint32_t, int>>& fac_buf) {
    const auto& spf = spf_table();
    spf.factor(a, fac_buf);
    ts_.clear();
    ts_.push_back(0);
    uint64_t mod = 1;
    local_.clear();
    for (auto& [p, e] : fac_buf) {
      uint64_t pe = 1;
      for (int i = 0; i < e; ++i) pe *= p;
      local_.clear();
      if (p == 2) {
        if (delta_) {
          if (!two_split_) return false;
          lift_two(pe, local_);
        } else {
          if (e >= 2) return false;
          local_.push_back(m_abs_ & 1);
        }
      } else {
        int k = arith::kronecker(int64_t(D_), p);
        if (k == -1) return false;
        if (k == 0) {
          if (e >= 2) return false;
          // b = 0 (mod p): t = -delta / 2 (mod p)
          uint64_t inv2 = (p + 1) / 2;
          local_.push_back(delta_ ? mulmod_u64(p - 1, inv2, p) : 0);
        } else {
          uint64_t M;  // solve x^2 = M (mod p^e)
          if (delta_)
            M = uint64_t(((int128(D_) % int128(pe)) + int128(pe)) % int128(pe));
          else
            M = uint64_t((int128(D_ / 4 % int64_t(pe)) + int128(pe)) % int128(pe));
          uint64_t rp = root_mod_p(p);
          uint64_t r0, r1;
          sqrt_mod_odd_power(M, p, e, rp, r0, r1);
          if (delta_) {
            uint64_t inv2 = (pe + 1) / 2;
            local_.push_back(mulmod_u64((r0 + pe - 1) % pe, inv2, pe));
            local_.push_back(mulmod_u64((r1 + pe - 1) % pe, inv2, pe));
          } else {
            local_.push_back(r0);
            local_.push_back(r1);
          }
        }
      }
      // CRT: ts_ (mod `mod`) x local_ (mod pe)
      next_.clear();
      for (uint64_t t : ts_)
        for (uint64_t r : local_) {
          // t' = t (mod mod), t' = r (mod pe)
          uint64_t minv = inv_mod(mod % pe, pe);
          uint64_t diff = (r + pe - t % pe) % pe;
          uint64_t t2 = t + mod * mulmod_u64(diff, minv, pe);
          next_.push_back(t2);
        }
      ts_.swap(next_);
      mod *= pe;
    }
    out_b.clear();
    for (uint64_t t : ts_) {
      int64_t b = int64_t(2 * t + delta_);
      if (b > int64_t(a)) b -= int64_t(2) * a;
      out_b.push_back(b);
    }
    return !out_b.empty();
  }

 private:
  static uint64_t inv_mod(uint64_t x, uint64_t m) {
    // m is an odd prime power here (or 1); extended Euclid
    int64_t a = int64_t(x % m), b = int64_t(m), x0 = 1, x1 = 0;
    while (b) {
      int64_t q = a / b;
      int64_t t = a - q * b;
      a = b;
      b = t;
      t = x0 - q * x1;
      x0 = x1;
      x1 = t;
    }
    int64_t r = x0 % int64_t(m);
    if (r < 0) r += int64_t(m);
    return uint64_t(r);
  }

  uint64_t root_mod_p(uint32_t p) {
    auto it = root_cache_.find(p);
    if (it != root_cache_.end()) return it->second;
    uint64_t M = delta_ ? arith::detail::mod_u64(D_, p) : arith::detail::mod_u64(D_ / 4, p);
    uint64_t r = sqrt_mod_prime(M, p);
    root_cache_.emplace(p, r);
    return r;
  }

  // Roots of t^2 + t + (1+|D|)/4 = 0 (mod 2^s), D = 1 (mod 8): two chains
  // lifted bit by bit (derivative 2t+1 is odd, so each lift is unique).
  void lift_two(uint64_t two_s, std::vector<uint64_t>& out) const {
    uint64_t c0 = ((absD_ + 1) / 4) % two_s;
    for (uint64_t t0 : {uint64_t(0), uint64_t(1)}) {
      uint64_t t = t0, mod = 2;
      while (mod < two_s) {
        uint64_t f = (t * t + t + c0) % (2 * mod);
        if (f % (2 * mod) != 0 && f % mod == 0) t += mod;
        mod *= 2;
      }
      out.push_back(t % two_s);
    }
  }

  int64_t D_;
  uint64_t absD_;
  uint64_t delta_;
  bool two_split_ = false;
  uint64_t m_abs_ = 0;  // |D|/4 when D even
  std::unordered_map<uint32_t, uint64_t> root_cache_;
  std::vector<uint64_t> ts_, local_, next_;
};

}  // namespace detail

// Largest |D| the full class-group engines accept (set by the SPF table the
// congruence solver factors form coefficients with).
inline uint64_t max_supported_abs_d() {
  uint64_t lim = spf_table().limit();
  return 3 * lim * lim;
}

// All reduced forms of fundamental discriminant D (|D| <= 3 * spf_limit^2).
inline std::vector<Form64> reduced_forms(int64_t D) {
  uint64_t absD = uint64_t(-D);
  uint32_t A = uint32_t(isqrt_u64(absD / 3));
  if (A > spf_table().limit())
    throw std::invalid_argument("reduced_forms: |D| beyond supported range");
  detail::FormSolver solver(D);
  std::vector<Form64> out;
  std::vector<int64_t> bs;
  std::vector<std::pair<uint32_t, int>> fac;
  for (uint32_t a = 1; a <= A; ++a) {
    if (!solver.roots(a, bs, fac)) continue;
    for (int64_t b : bs) {
      int64_t c = int64_t((int128(b) * b + int128(absD)) / (4 * int128(a)));
      if (c < int64_t(a)) continue;
      if (b < 0 && c == int64_t(a)) continue;
      out.push_back(Form64{int64_t(a), b, c});
    }
  }
  return out;
}

// h(D) = number of reduced forms. Counting only; no square roots needed for
// a below sqrt(|D|)/2.
inline uint64_t class_number(int64_t D) {
  uint64_t absD = uint64_t(-D);
  uint32_t A = uint32_t(isqrt_u64(absD / 3));
  if (A > spf_table().limit())
    throw std::invalid_argument("class_number: |D| beyond supported range");
  detail::FormSolver solver(D);
  uint64_t h = 0;
  std::vector<int64_t> bs;
  std::vector<std::pair<uint32_t, int>> fac;
  for (uint32_t a = 1; a <= A; ++a) {
    if (4 * uint64_t(a) * a <= absD) {
      h += uint64_t(solver.count_roots(a, fac));
    } else {
      if (!solver.roots(a, bs, fac)) continue;
      for (int64_t b : bs) {
        int64_t c = int64_t((int128(b) * b + int128(absD)) / (4 * int128(a)));
        if (c < int64_t(a)) continue;
        if (b < 0 && c == int64_t(a)) continue;
        ++h;
      }
    }
  }
  return h;
}

// Elementary divisor structure from the full element list.
inline ClassGroupInfo class_group(int64_t D) {
  auto forms = reduced_forms(D);
  ClassGroupInfo info;
  info.h = forms.size();
  if (info.h == 1) return info;
  auto hfac = factorize_u128(info.h);
  std::vector<std::vector<int>> partitions;  // per prime, part sizes descending
  std::vector<uint64_t> primes;
  for (auto& [p128, v] : hfac) {
    uint64_t p = uint64_t(p128);
    uint64_t sylow_cofactor = info.h;
    for (int i = 0; i < v; ++i) sylow_cofactor /= p;
    // tally[j] = number of elements whose p-part has order exactly p^j
    std::vector<uint64_t> tally(size_t(v) + 1, 0);
    for (auto& f : forms) {
      auto g = quadforms::pow_form(f, sylow_cofactor);
      int j = 0;
      while (!quadforms::is_principal(g)) {
        g = quadforms::pow_form(g, p);
        ++j;
      }
      ++tally[j];
    }
    // lambda_j = number of cyclic p-factors of order >= p^j
    std::vector<int> lambda(size_t(v) + 2, 0);
    uint64_t N_prev = tally[0];
    for (int j = 1; j <= v; ++j) {
      uint64_t N_j = N_prev + tally[j];
      uint64_t ratio = N_j / N_prev;
      int lg = 0;
      while (ratio > 1) ratio /= p, ++lg;
      lambda[j] = lg;
      N_prev = N_j;
    }
    std::vector<int> parts;
    for (int j = v; j >= 1; --j)
      for (int i = 0; i < lambda[j] - lambda[j + 1]; ++i) parts.push_back(j);
    std::sort(parts.rbegin(), parts.rend());
    partitions.push_back(parts);
    primes.push_back(p);
  }
  size_t s = 0;
  for (auto& parts : partitions) s = std::max(s, parts.size());
  std::vector<uint64_t> divisors(s, 1);
  for (size_t pi = 0; pi < partitions.size(); ++pi) {
    for (size_t i = 0; i < partitions[pi].size(); ++i) {
      uint64_t pe = 1;
      for (int j = 0; j < partitions[pi][i]; ++j) pe *= primes[pi];
      divisors[i] *= pe;  // i = 0 holds the largest divisor
    }
  }
  std::reverse(divisors.begin(), divisors.end());
  info.divisors = divisors;
  info.exponent = divisors.back();
  info.two_rank = int(std::count_if(divisors.begin(), divisors.end(),
                                    [](uint64_t n) { return n % 2 == 0; }));
  return info;
}

// Exact exponent E(D).
inline uint64_t exponent(int64_t D) { return class_group(D).exponent; }

enum class ExponentMode {
  at_most,  // accept iff E(D) <= cap
  divides,  // accept iff E(D) | cap
};

// Generator scan: walks prime forms above all non-inert primes up to the
// reduction bound sqrt(|D|/3). In an abelian group the exponent is the lcm
// of the orders of any generating set, so on success the returned value is
// exactly E(D); nullopt means the test failed (order cap hit, lcm too big,
// or a split prime q with q^cap < |D|/4 forced a large order).
inline std::optional<uint64_t> exponent_bounded(int64_t D, int cap,
                                                ExponentMode mode = ExponentMode::at_most) {
  uint64_t absD = uint64_t(-D);
  uint64_t MB = isqrt_u64(absD / 3);
  // largest q with q^cap < |D|/4
  uint64_t lemma_cutoff = 0;
  {
    double guess = std::pow(double(absD) / 4.0, 1.0 / cap);
    uint64_t r = uint64_t(guess) + 2;
    auto pw_below = [&](uint64_t q) {
      uint128 v = 1;
      for (int i = 0; i < cap; ++i) {
        v *= q;
        if (v >= uint128(absD)) return false;
      }
      return 4 * v < uint128(absD);
    };
    while (r > 0 && !pw_below(r)) --r;
    lemma_cutoff = r;
  }
  uint64_t E = 1;
  if (MB > 0xfffffffeULL) throw std::invalid_argument("exponent_bounded: |D| too large");
  // Primes are fetched in growing blocks: a candidate that fails does so at
  // its first few non-inert primes, long before a large table is needed.
  uint64_t scanned = 0;
  uint32_t limit = uint32_t(std::min<uint64_t>(MB, 1u << 16));
  for (;;) {
    auto ps = primes_upto(limit);
    for (uint32_t q : *ps) {
      if (uint64_t(q) > MB) return E;
      if (q <= scanned) continue;
      int k = arith::kronecker(D, q);
      if (k == -1) continue;
      if (k == 1 && q <= lemma_cutoff) return std::nullopt;  // order > cap forced
      auto f = quadforms::prime_form(D, uint64_t(q));
      auto ord = quadforms::order_upto(f, cap);
      if (!ord) return std::nullopt;
      if (mode == ExponentMode::divides && cap % *ord != 0) return std::nullopt;
      E = std::lcm(E, uint64_t(*ord));
      if (E > uint64_t(cap)) return std::nullopt;
    }
    scanned = ps->back();
    if (scanned >= MB || uint64_t(limit) >= MB) return E;
    limit = uint32_t(std::min<uint64_t>(MB, uint64_t(limit) * 4));
  }
}

// ---- windowed sweep ----------------------------------------------------

struct FormAB {
  uint32_t a;
  int32_t b;
};

// Visits every |D| in [lo, hi) that has at least one reduced form of
// discriminant -|D| (imprimitive forms included for non-fundamental |D|),
// ascending, with the complete form list. hi <= 2^32.
template <class CB>
void scan_reduced_forms(uint64_t lo, uint64_t hi, CB&& cb) {
  if (hi > (uint64_t(1) << 32)) throw std::invalid_argument("scan_reduced_forms: hi too large");
  while (lo < hi) {
    uint64_t budget = 8u << 20;
    double density = 0.25 * std::sqrt(double(hi));
    uint64_t width = std::max<uint64_t>(1024, uint64_t(double(budget) / (density + 1)));
    uint64_t mid = std::min(hi, lo + width);

    uint64_t n = mid - lo;
    uint32_t A = uint32_t(isqrt_u64((mid - 1) / 3));
    std::vector<uint32_t> counts(n + 1, 0);
    auto visit = [&](auto&& fn) {
      for (uint32_t a = 1; a <= A; ++a) {
        uint64_t fa = 4 * uint64_t(a);
        for (int64_t b = -(int64_t(a) - 1); b <= int64_t(a); ++b) {
          uint64_t b2 = uint64_t(b * b);
          uint64_t cmin = (lo + b2 + fa - 1) / fa;
          if (cmin < a) cmin = a;
          uint64_t cmax = (mid - 1 + b2) / fa;  // inclusive
          for (uint64_t c = cmin; c <= cmax; ++c) {
            if (b < 0 && c == a) continue;
            fn(fa * c - b2, a, int32_t(b));
          }
        }
      }
    };
    visit([&](uint64_t v, uint32_t, int32_t) { ++counts[v - lo]; });
    std::vector<uint64_t> offsets(n + 1, 0);
    uint64_t total = 0;
    for (uint64_t i = 0; i < n; ++i) {
      offsets[i] = total;
      total += counts[i];
    }
    offsets[n] = total;
    std::vector<FormAB> storage(total);
    std::vector<uint64_t> fill(offsets.begin(), offsets.end());
    visit([&](uint64_t v, uint32_t a, int32_t b) { storage[fill[v - lo]++] = FormAB{a, b}; });
    for (uint64_t i = 0; i < n; ++i) {
      if (counts[i] == 0) continue;
      std::span<const FormAB> forms(storage.data() + offsets[i], counts[i]);
      cb(lo + i, forms);
    }
    lo = mid;
  }
}

}  // namespace classgroup
}  // namespace smallexp
