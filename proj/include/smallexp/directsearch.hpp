#pragma once

// Direct enumeration of fields where a given small prime p splits with class
// order dividing c: every such field shows up as 4p^c = x^2 + |D|y^2 with
// 0 < x < 2p^(c/2), so scanning x and extracting the squarefree kernel of
// 4p^c - x^2 yields a superset that exact per-field tests then cut down.
// direct_search additionally sifts "p is the smallest split prime" on the
// raw values 4p^c - x^2, so the expensive factoring only runs on the tiny
// set of sift survivors.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "arith.hpp"
#include "classgroup.hpp"
#include "int_types.hpp"
#include "parallel.hpp"
#include "primes.hpp"
#include "quadforms.hpp"
#include "search_types.hpp"

namespace smallexp {
namespace directsearch {

namespace detail {

// v = m * f^2 with m squarefree.
inline void squarefree_kernel(uint64_t v, uint64_t& m, uint64_t& f) {
  m = 1;
  f = 1;
  uint64_t bound = arith::detail::icbrt_u128(v) + 1;
  auto ps = primes_upto(uint32_t(bound));
  for (uint32_t p : *ps) {
    if (uint128(p) * p * p > v) break;
    if (v % p) continue;
    int e = 0;
    while (v % p == 0) v /= p, ++e;
    if (e & 1) m *= p;
    for (int i = 0; i < e / 2; ++i) f *= p;
  }
  uint128 root;
  if (v > 1 && is_square_u128(v, &root))
    f *= uint64_t(root);
  else
    m *= v;  // v is 1, prime, or a product of two distinct primes
}

// Fundamental discriminant with 4p^c - x^2 = |D| y^2, if one exists.
inline bool disc_from_value(uint64_t v, int64_t& D) {
  uint64_t m, f;
  squarefree_kernel(v, m, f);
  if (m % 4 == 3) {
    D = -int64_t(m);
    return true;
  }
  if (f % 2 == 0) {  // |D| = 4m needs y = f/2
    D = -4 * int64_t(m);
    return true;
  }
  return false;
}

inline uint64_t checked_pow4(uint64_t p, int c) {
  uint128 K = 4;
  for (int i = 0; i < c; ++i) {
    K *= p;
    if (K >> 63) throw std::invalid_argument("direct search: 4p^c exceeds the 63-bit range");
  }
  return uint64_t(K);
}

}  // namespace detail

// All fundamental D < 0 such that p splits in Q(sqrt(D)) and the class of a
// prime ideal above p has order dividing c. Sorted by |D|. Intended for
// moderate p^(c/2); the smallest-split-prime search uses the sifted pipeline
// below instead.
inline std::vector<Int> fields_with_split_prime(uint64_t p, int c) {
  if (!is_prime_u64(p)) throw std::invalid_argument("fields_with_split_prime: p must be prime");
  uint64_t K = detail::checked_pow4(p, c);
  uint64_t X = isqrt_u64(K - 1);
  std::vector<int64_t> cands;
  for (uint64_t x = 1; x <= X; ++x) {
    uint64_t v = K - x * x;
    int64_t D;
    if (detail::disc_from_value(v, D)) cands.push_back(D);
  }
  std::sort(cands.begin(), cands.end(), std::greater<int64_t>());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  std::vector<Int> out;
  for (int64_t D : cands) {
    if (arith::kronecker(D, p) != 1) continue;
    auto f = quadforms::prime_form<int64_t>(D, p);
    auto ord = quadforms::order_upto(f, c);
    if (!ord || c % *ord != 0) continue;
    out.push_back(Int(D));
  }
  std::sort(out.begin(), out.end(), [](const Int& a, const Int& b) { return abs(a) < abs(b); });
  return out;
}

// Complete list of fields with E(D) | c and smallest split prime <= max_p,
// sorted by |D|. The per-prime scan sifts x values by testing
// (-(4p^c - x^2) / q) != 1 for every prime q < p straight on the value (no
// factoring; conservative where q divides the value), then verifies sift
// survivors exactly.
inline std::vector<SearchHit> direct_search(uint64_t max_p, int c, int tasks = 0) {
  if (c < 1 || c > 8) throw std::invalid_argument("direct_search: c in 1..8");
  auto ps = primes_upto(uint32_t(max_p));
  std::vector<SearchHit> hits;

  for (uint32_t p : *ps) {
    if (p > max_p) break;
    uint64_t K = detail::checked_pow4(p, c);
    uint64_t X = isqrt_u64(K - 1);

    // Per sift prime q < p the rejected x classes mod q are fixed:
    // -v = x^2 - K (mod q), so reject x when (x^2 - K mod q / q) = 1.
    // The smallest primes are folded into one wheel table; the 2-test uses
    // x mod 8 (rejects the odd-y representations of fields where 2 splits).
    auto bad_x_table = [&](uint32_t q) {
      std::vector<uint8_t> tab(q);
      for (uint64_t t = 0; t < q; ++t) {
        uint64_t neg = (t * t % q + q - K % q) % q;
        tab[t] = (arith::kronecker(int64_t(neg), q) == 1) ? 1 : 0;
      }
      return tab;
    };
    uint64_t wheel = 1;
    std::vector<uint32_t> wheel_qs, rest_qs;
    for (uint32_t q : *ps) {
      if (q >= p) break;
      if (q == 2) continue;
      if (q <= 13)
        wheel_qs.push_back(q), wheel *= q;
      else
        rest_qs.push_back(q);
    }
    std::vector<uint8_t> bad_wheel(wheel, 0);
    for (uint32_t q : wheel_qs) {
      auto tab = bad_x_table(q);
      for (uint64_t t = 0; t < wheel; ++t)
        if (tab[t % q]) bad_wheel[t] = 1;
    }
    std::vector<std::vector<uint8_t>> bad_rest;
    for (uint32_t q : rest_qs) bad_rest.push_back(bad_x_table(q));
    uint8_t bad8[8] = {0};
    if (p > 2)
      for (uint64_t t = 0; t < 8; ++t) bad8[t] = ((K + 64 - t * t) % 8 == 7) ? 1 : 0;

    int lanes = resolve_tasks(tasks);
    std::vector<std::vector<int64_t>> cand_per;
    cand_per.resize(size_t(lanes));
    parallel_chunks(tasks, X, [&](int t, uint64_t begin, uint64_t end) {
      auto& cands = cand_per[size_t(t)];
      uint64_t w = (begin + 1) % wheel;
      for (uint64_t x = begin + 1; x <= end; ++x, w = (w + 1 == wheel ? 0 : w + 1)) {
        if (bad8[x & 7]) continue;
        if (bad_wheel[w]) continue;
        bool rejected = false;
        for (size_t qi = 0; qi < rest_qs.size(); ++qi) {
          if (bad_rest[qi][x % rest_qs[qi]]) {
            rejected = true;
            break;
          }
        }
        if (rejected) continue;
        int64_t D;
        if (detail::disc_from_value(K - x * x, D)) cands.push_back(D);
      }
    });

    std::vector<int64_t> cands;
    for (auto& cv : cand_per) cands.insert(cands.end(), cv.begin(), cv.end());
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    for (int64_t D : cands) {
      if (arith::kronecker(D, p) != 1) continue;
      bool smaller_split = false;
      for (uint32_t q : *ps) {
        if (q >= p) break;
        if (arith::kronecker(D, q) == 1) {
          smaller_split = true;
          break;
        }
      }
      if (smaller_split) continue;
      auto f = quadforms::prime_form<int64_t>(D, p);
      auto ord = quadforms::order_upto(f, c);
      if (!ord || c % *ord != 0) continue;
      auto E = classgroup::exponent_bounded(D, c, classgroup::ExponentMode::divides);
      if (!E) continue;
      auto F = arith::factor_fundamental(Int(D));
      SearchHit h;
      h.d = Int(D);
      h.h = classgroup::class_number(D);
      h.exponent = *E;
      h.omega = F.omega;
      h.smallest_split_prime = p;
      hits.push_back(std::move(h));
    }
  }
  sort_by_abs_d(hits);
  return hits;
}

}  // namespace directsearch
}  // namespace smallexp
