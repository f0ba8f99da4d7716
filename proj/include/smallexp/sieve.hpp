#pragma once

// Multifocused bit-vector sieve: find every |D| below a bound whose field
// has no split prime up to a cap. Admissible residues modulo 16 and three
// odd moduli fix the behaviour at the modulus primes; each remaining sieve
// prime contributes one 64-bit mask per residue class, and a single AND over
// those masks tests the 64 arithmetic progressions |D| = r + k*m at once.
//
// Two equivalent execution paths: the lane path iterates CRT combinations
// (the production layout), the scan path walks a window value by value with
// admissibility bitmaps (cheaper when the window is tiny relative to the
// number of combinations). Both produce identical survivor sets.

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "arith.hpp"
#include "classgroup.hpp"
#include "int_types.hpp"
#include "parallel.hpp"
#include "primes.hpp"
#include "search_types.hpp"

namespace smallexp {
namespace sieve {

struct SieveConfig {
  std::array<std::vector<uint32_t>, 3> modulus_groups;  // odd primes, disjoint
  uint32_t sieve_prime_max = 193;
  uint128 abs_lo = 0;   // search window [max(abs_lo, 3), abs_hi)
  uint128 abs_hi = 0;
  int exponent = 8;     // c in the 4p^c survivor filter
  int tasks = 0;

  // The full-scale layout: m = 16 * 255255 * 392863 * 3065857 ~ 4.9e18,
  // sieve primes up to 193, |D| < 3.1e20.
  static SieveConfig paper() {
    SieveConfig c;
    c.modulus_groups = {std::vector<uint32_t>{3, 5, 7, 11, 13, 17},
                        std::vector<uint32_t>{19, 23, 29, 31},
                        std::vector<uint32_t>{37, 41, 43, 47}};
    c.sieve_prime_max = 193;
    c.abs_hi = uint128(31) * uint128(10000000000ULL) * uint128(1000000000ULL);  // 3.1e20
    return c;
  }

  // Shrunk layout that finishes in minutes: m ~ 1.8e9, split primes up to 97
  // excluded, |D| < 10^10 by default.
  static SieveConfig desk() {
    SieveConfig c;
    c.modulus_groups = {std::vector<uint32_t>{3, 5, 7, 11},
                        std::vector<uint32_t>{13, 17},
                        std::vector<uint32_t>{19, 23}};
    c.sieve_prime_max = 97;
    c.abs_hi = uint128(10000000000ULL);  // 1e10
    return c;
  }
};

inline const std::array<uint64_t, 4>& admissible_residues_16() {
  static const std::array<uint64_t, 4> r{3, 4, 8, 11};
  return r;
}

// All residues r mod (product of `primes`) with (-r/p) != 1 for each p.
inline std::vector<uint64_t> admissible_residues(const std::vector<uint32_t>& primes) {
  std::vector<uint64_t> res{0};
  uint64_t mod = 1;
  for (uint32_t p : primes) {
    std::vector<uint64_t> local;
    for (uint64_t i = 0; i < p; ++i)
      if (arith::kronecker(-int64_t(i), p) != 1) local.push_back(i);
    std::vector<uint64_t> next;
    next.reserve(res.size() * local.size());
    // t = r (mod mod), t = i (mod p)
    uint64_t minv = powmod_u64(mod % p, p - 2, p);
    for (uint64_t r : res)
      for (uint64_t i : local) {
        uint64_t diff = (i + p - r % p) % p;
        next.push_back(r + mod * mulmod_u64(diff, minv, p));
      }
    res.swap(next);
    mod *= p;
  }
  std::sort(res.begin(), res.end());
  return res;
}

struct ResidueTables {
  uint64_t m = 0;  // 16 * m1 * m2 * m3
  std::array<uint64_t, 3> mods{};
  std::array<std::vector<uint64_t>, 3> residues;
  std::vector<uint32_t> sieve_primes;       // primes in (2, max] not dividing m
  std::vector<std::vector<uint64_t>> lane;  // lane[i][r mod p], 64 progressions
  // CRT mixing weights: r = sum(w[i] * residue_i) mod m, index 3 = mod 16
  std::array<uint64_t, 4> weight{};
};

inline ResidueTables build_lane_tables(const SieveConfig& cfg) {
  ResidueTables T;
  uint128 m128 = 16;
  for (auto& g : cfg.modulus_groups)
    for (uint32_t p : g) m128 *= p;
  if (m128 >> 63) throw std::invalid_argument("sieve: modulus must fit in 63 bits");
  T.m = uint64_t(m128);

  for (int i = 0; i < 3; ++i) {
    uint64_t mi = 1;
    for (uint32_t p : cfg.modulus_groups[size_t(i)]) mi *= p;
    T.mods[size_t(i)] = mi;
    T.residues[size_t(i)] = admissible_residues(cfg.modulus_groups[size_t(i)]);
  }

  // idempotent weights for the quadruple CRT
  std::array<uint64_t, 4> mods{T.mods[0], T.mods[1], T.mods[2], 16};
  for (int i = 0; i < 4; ++i) {
    uint64_t mi = mods[size_t(i)];
    uint64_t M = T.m / mi;
    // inverse of M mod mi by extended Euclid
    int64_t a = int64_t(M % mi), b = int64_t(mi), x0 = 1, x1 = 0;
    while (b) {
      int64_t q = a / b, t = a - q * b;
      a = b;
      b = t;
      t = x0 - q * x1;
      x0 = x1;
      x1 = t;
    }
    uint64_t inv = uint64_t(x0 < 0 ? x0 + int64_t(mi) : x0);
    T.weight[size_t(i)] = mulmod_u64(M % T.m, inv, T.m);
  }

  auto ps = primes_upto(cfg.sieve_prime_max);
  for (uint32_t p : *ps) {
    if (p > cfg.sieve_prime_max) break;
    if (p == 2 || T.m % p == 0) continue;
    T.sieve_primes.push_back(p);
    std::vector<uint8_t> split(p);
    for (uint32_t j = 0; j < p; ++j)
      split[j] = (arith::kronecker(-int64_t(j), p) == 1) ? 1 : 0;
    uint64_t m_mod = T.m % p;
    std::vector<uint64_t> masks(p);
    for (uint64_t i = 0; i < p; ++i) {
      uint64_t mask = 0;
      uint64_t j = i;
      for (int k = 0; k < 64; ++k) {
        if (!split[j]) mask |= uint64_t(1) << k;
        j += m_mod;
        if (j >= p) j -= p;
      }
      masks[i] = mask;
    }
    T.lane.push_back(std::move(masks));
  }
  return T;
}

namespace detail {

// Bit phase survivors in [lo, hi), ascending: every admissible |D| whose
// Kronecker battery never shows a split prime.
inline std::vector<uint128> bit_phase(const SieveConfig& cfg, const ResidueTables& T,
                                      uint128 lo, uint128 hi) {
  uint64_t combos = 4;
  for (auto& r : T.residues) combos *= r.size();
  bool window_scan = (hi - lo) < uint128(combos);

  std::vector<uint128> survivors;
  if (window_scan) {
    // per-modulus admissibility bitmaps
    std::array<std::vector<uint8_t>, 3> ok;
    for (int i = 0; i < 3; ++i) {
      ok[size_t(i)].assign(T.mods[size_t(i)], 0);
      for (uint64_t r : T.residues[size_t(i)]) ok[size_t(i)][r] = 1;
    }
    std::array<uint8_t, 16> ok16{};
    for (uint64_t r : admissible_residues_16()) ok16[r] = 1;
    for (uint128 v = lo; v < hi; ++v) {
      if (!ok16[uint64_t(v % 16)]) continue;
      if (!ok[0][uint64_t(v % T.mods[0])]) continue;
      if (!ok[1][uint64_t(v % T.mods[1])]) continue;
      if (!ok[2][uint64_t(v % T.mods[2])]) continue;
      bool split_found = false;
      for (size_t pi = 0; pi < T.sieve_primes.size(); ++pi) {
        uint32_t p = T.sieve_primes[pi];
        uint64_t i = uint64_t(v % p);
        if (!((T.lane[pi][i] >> 0) & 1)) {  // bit 0 of the mask at i: value i itself
          split_found = true;
          break;
        }
      }
      if (!split_found) survivors.push_back(v);
    }
    return survivors;
  }

  // lane path over CRT combinations, parallel over the largest residue list
  size_t big = 0;
  for (size_t i = 1; i < 3; ++i)
    if (T.residues[i].size() > T.residues[big].size()) big = i;
  size_t o1 = (big + 1) % 3, o2 = (big + 2) % 3;

  int lanes = resolve_tasks(cfg.tasks);
  std::vector<std::vector<uint128>> per;
  per.resize(size_t(lanes));
  parallel_chunks(cfg.tasks, T.residues[big].size(), [&](int t, uint64_t begin, uint64_t end) {
    auto& out = per[size_t(t)];
    for (uint64_t bi = begin; bi < end; ++bi) {
      uint64_t part_b = mulmod_u64(T.weight[big], T.residues[big][bi], T.m);
      for (uint64_t ra : T.residues[o1]) {
        uint64_t part_a = (part_b + mulmod_u64(T.weight[o1], ra, T.m)) % T.m;
        for (uint64_t rb : T.residues[o2]) {
          uint64_t part_ab = (part_a + mulmod_u64(T.weight[o2], rb, T.m)) % T.m;
          for (uint64_t r16 : admissible_residues_16()) {
            uint64_t r = (part_ab + mulmod_u64(T.weight[3], r16, T.m)) % T.m;
            // blocks of 64 progressions: values r + (64j + k) m
            uint128 step = uint128(T.m);
            uint128 first = r < lo ? (lo - r + step - 1) / step : 0;
            uint128 jblock = first / 64;
            for (;;) {
              uint128 base = uint128(r) + jblock * 64 * step;
              if (base >= hi) break;
              uint64_t mask = ~uint64_t(0);
              for (size_t pi = 0; pi < T.sieve_primes.size(); ++pi) {
                uint32_t p = T.sieve_primes[pi];
                mask &= T.lane[pi][uint64_t(base % p)];
                if (!mask) break;
              }
              if (mask) {
                for (int k = 0; k < 64; ++k) {
                  if (!((mask >> k) & 1)) continue;
                  uint128 v = base + uint128(k) * step;
                  if (v >= lo && v < hi) out.push_back(v);
                }
              }
              jblock += 1;
            }
          }
        }
      }
    }
  });
  for (auto& v : per) survivors.insert(survivors.end(), v.begin(), v.end());
  std::sort(survivors.begin(), survivors.end());
  return survivors;
}

}  // namespace detail

// Full sieve: bit phase, then per survivor fundamentality, the smallest
// split prime (all primes up to sieve_prime_max are non-split by
// construction), and the 4p^c filter; survivors that stay candidates get
// their exponent verified exactly.
inline std::vector<SieveRecord> sieve_run(const SieveConfig& cfg) {
  if (cfg.abs_hi <= cfg.abs_lo) throw std::invalid_argument("sieve_run: empty window");
  auto T = build_lane_tables(cfg);
  uint128 lo = cfg.abs_lo < 3 ? uint128(3) : cfg.abs_lo;
  auto values = detail::bit_phase(cfg, T, lo, cfg.abs_hi);

  std::vector<SieveRecord> out;
  for (uint128 v : values) {
    Int d = -to_int(v);
    if (!arith::is_fundamental(d)) continue;
    SieveRecord rec;
    rec.d = d;
    uint64_t p = 0;
    {
      uint32_t limit = cfg.sieve_prime_max * 2;
      for (; p == 0;) {
        auto ps = primes_upto(limit);
        for (uint32_t q : *ps) {
          if (q <= cfg.sieve_prime_max) continue;
          if (arith::kronecker_int(d, Int(q)) == 1) {
            p = q;
            break;
          }
        }
        if (p == 0) {
          if (limit > 100000000) throw std::runtime_error("sieve_run: no split prime found");
          limit *= 2;
        }
      }
    }
    rec.smallest_split_prime = p;
    Int four_pc = 4;
    for (int i = 0; i < cfg.exponent; ++i) four_pc *= p;
    if (four_pc > to_int(v) && v < uint128(classgroup::max_supported_abs_d())) {
      rec.exponent_or_minus1 = int64_t(classgroup::exponent(-int64_t(uint64_t(v))));
    } else {
      rec.exponent_or_minus1 = -1;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace sieve
}  // namespace smallexp
