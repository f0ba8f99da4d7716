#pragma once

// Recursive enumeration of negative fundamental discriminants with exactly k
// star factors whose class group has exponent dividing c = 2^r, pruned by
// analytic ceilings indexed by a lower bound on the Redei rank. Also the
// exhaustive small-discriminant engine (brute_force_range) used both as the
// low range of the pipeline and as the universal test oracle.

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "arith.hpp"
#include "bounds.hpp"
#include "classgroup.hpp"
#include "int_types.hpp"
#include "parallel.hpp"
#include "primes.hpp"
#include "quadforms.hpp"
#include "redei.hpp"
#include "search_types.hpp"

namespace smallexp {
namespace enumerator {

using bounds::BoundMode;
using bounds::BoundTable;

struct SearchConfig {
  int c = 8;                    // target exponent, one of 2, 4, 8
  int k_max = 0;                // 0: derive from compute_N
  Int lower_cutoff = 1000000;   // hits at or below are left to brute force
  BoundMode mode = BoundMode::chen_one_exception;
  Int max_abs_d = 0;            // 0: no explicit ceiling
  int tasks = 0;
};

// Star factor as the enumeration carries it: small values, native words.
struct StarFactor {
  int64_t value;
  uint64_t prime;
};

namespace detail {

inline Int product_of(const std::vector<StarFactor>& fs) {
  Int p = 1;
  for (auto& f : fs) p *= f.value;
  return p;
}

// Redei rank of the fully known matrix of D = prod(factors).
inline int redei_rank_of(const std::vector<StarFactor>& fs) {
  int k = int(fs.size());
  std::vector<uint64_t> rows(size_t(k), 0);
  for (int i = 0; i < k; ++i) {
    uint64_t diag = 0;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      uint64_t bit = (arith::kronecker(fs[j].value, fs[i].prime) == -1) ? 1 : 0;
      rows[i] |= bit << j;
      diag ^= bit;
    }
    rows[i] |= diag << i;
  }
  return redei::gf2_rank(rows);
}

inline int lower_redei_rank_of(const std::vector<StarFactor>& fs) {
  int l = int(fs.size());
  if (l == 0) return 0;
  std::vector<uint64_t> offdiag(size_t(l), 0);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      if (i == j) continue;
      if (arith::kronecker(fs[j].value, fs[i].prime) == -1) offdiag[i] |= uint64_t(1) << j;
    }
  return redei::min_rank_free_diagonal(offdiag);
}

// f^c principal for the prime form above q, on the integer type fitting D.
inline bool cth_power_principal(const Int& D, uint64_t q, int c) {
  if ((abs(D) >> 62) == 0) {
    int64_t d = int64_t(D);
    auto f = quadforms::prime_form<int64_t>(d, q);
    return quadforms::is_principal(quadforms::pow_form(f, uint64_t(c)));
  }
  auto f = quadforms::prime_form<Int>(D, q);
  return quadforms::is_principal(quadforms::pow_form(f, uint64_t(c)));
}

// Check steps 1..7; returns the exact exponent when it divides c.
inline std::optional<uint64_t> check_impl(int c, const std::vector<StarFactor>& factors,
                                          const BoundTable& table) {
  Int D = product_of(factors);
  if (D >= 0) return std::nullopt;  // step 1
  Int absD = -D;

  uint64_t q1 = quadforms::smallest_split_prime(D);  // step 2
  if (quadforms::order_exceeds(q1, c, D)) return std::nullopt;  // step 3

  if (!cth_power_principal(D, q1, c)) return std::nullopt;  // step 4
  auto qs = quadforms::split_primes(D, 2);  // step 5: 2nd split prime, no order shortcut
  if (!cth_power_principal(D, qs[1], c)) return std::nullopt;

  int s = redei_rank_of(factors);  // step 6
  if (s < int(table.ceilings.size()) && absD > table.ceilings[size_t(s)]) return std::nullopt;

  // step 7: exact exponent divisibility
  if ((absD >> 62) != 0)
    throw std::runtime_error("check: class-group verification beyond supported |D| range");
  return classgroup::exponent_bounded(int64_t(D), c, classgroup::ExponentMode::divides);
}

struct Subtree {
  int k;
  std::vector<StarFactor> partial;
  size_t next_prime_index;  // 1-based
};

// Snapshot-backed 1-based prime access; grows without touching the shared
// table lock on every call.
class PrimeView {
 public:
  PrimeView() : list_(primes_upto(1u << 20)) {}
  uint64_t operator[](size_t idx1) {
    while (idx1 > list_->size()) {
      uint64_t p_back = list_->back();
      list_ = primes_upto(uint32_t(std::min<uint64_t>(p_back * 2, 0xfffffffeULL)));
    }
    return (*list_)[idx1 - 1];
  }

 private:
  PrimeList list_;
};

}  // namespace detail

// Check(c, p_1*, ..., p_k*): true iff the product is negative and the class
// group of the corresponding field has exponent dividing c.
inline bool check(int c, const std::vector<StarFactor>& factors, const BoundTable& table) {
  return detail::check_impl(c, factors, table).has_value();
}

namespace detail {

inline SearchHit make_hit(const Int& D, uint64_t exponent, int omega) {
  SearchHit h;
  h.d = D;
  h.exponent = exponent;
  h.omega = omega;
  if ((abs(D) >> 62) != 0) throw std::runtime_error("make_hit: |D| beyond class-number range");
  h.h = classgroup::class_number(int64_t(D));
  h.smallest_split_prime = quadforms::smallest_split_prime(D);
  return h;
}

// The NextTuple loop. Appends star primes with index >= m while the minimal
// completion still fits under the rank-indexed ceiling; recurses one level
// deeper or runs Check at the leaves. When `spawn` is non-null, recursive
// calls are recorded as subtrees instead of being descended (top-level task
// generation).
inline void next_tuple(size_t m, std::vector<StarFactor>& partial, int k,
                       const SearchConfig& cfg, const BoundTable& table,
                       std::vector<SearchHit>& out, std::vector<Subtree>* spawn) {
  int l = int(partial.size());
  Int P = abs(product_of(partial));

  int s = lower_redei_rank_of(partial);
  if (s > k - 1) s = k - 1;
  Int B = table.ceilings[size_t(s)];
  if (cfg.max_abs_d > 0 && cfg.max_abs_d < B) B = cfg.max_abs_d;
  Int bound = B / P;

  // C = P[i] * ... * P[i + k - l - 1], the least product of k - l unused primes
  size_t i = m;
  size_t span = size_t(k - l);
  PrimeView prime;
  Int C = 1;
  for (size_t j = i; j < i + span; ++j) C *= prime[j];
  while (C <= bound) {
    uint64_t p = prime[i];
    partial.push_back(StarFactor{arith::star_of_odd_prime(p), p});
    if (l + 1 == k) {
      Int D = product_of(partial);
      if (-D > cfg.lower_cutoff && (cfg.max_abs_d == 0 || -D <= cfg.max_abs_d)) {
        auto e = check_impl(cfg.c, partial, table);
        if (e) out.push_back(make_hit(D, *e, k));
      }
    } else if (spawn) {
      spawn->push_back(Subtree{k, partial, i + 1});
    } else {
      next_tuple(i + 1, partial, k, cfg, table, out, nullptr);
    }
    partial.pop_back();
    C = C / prime[i] * prime[i + span];
    ++i;
  }
}

}  // namespace detail

// All fields with exponent dividing cfg.c and lower_cutoff < |D| (<= max_abs_d
// when set), sorted by |D|. Complete above the cutoff with at most one
// exception under chen_one_exception, or under the no-Siegel-zero hypothesis
// with tatuzawa_no_siegel_zero.
inline std::vector<SearchHit> enumerate_exponent(const SearchConfig& cfg) {
  if (cfg.c != 2 && cfg.c != 4 && cfg.c != 8)
    throw std::invalid_argument("enumerate_exponent: c must be 2, 4 or 8");
  if (cfg.mode == BoundMode::chen_one_exception && cfg.lower_cutoff < 1000000)
    throw std::invalid_argument("enumerate_exponent: chen mode requires cutoff >= 10^6");
  int r = cfg.c == 2 ? 1 : cfg.c == 4 ? 2 : 3;
  int k_max = cfg.k_max > 0 ? cfg.k_max : bounds::compute_N(r).first;

  static const std::vector<std::vector<StarFactor>> seeds = {
      {},                       // odd discriminants
      {StarFactor{-4, 2}},
      {StarFactor{-8, 2}},
      {StarFactor{8, 2}},
  };

  std::vector<SearchHit> hits;
  std::vector<detail::Subtree> tasks;
  std::vector<BoundTable> tables;
  tables.reserve(size_t(k_max));
  for (int k = 1; k <= k_max; ++k) tables.push_back(bounds::bound_table(cfg.c, k, cfg.mode));

  for (int k = 1; k <= k_max; ++k) {
    for (const auto& seed : seeds) {
      std::vector<StarFactor> partial = seed;
      if (int(partial.size()) == k) {
        // the discriminant is the 2-adic seed itself
        Int D = detail::product_of(partial);
        if (D < 0 && -D > cfg.lower_cutoff) {
          auto e = detail::check_impl(cfg.c, partial, tables[size_t(k - 1)]);
          if (e) hits.push_back(detail::make_hit(D, *e, k));
        }
        continue;
      }
      detail::next_tuple(2, partial, k, cfg, tables[size_t(k - 1)], hits, &tasks);
    }
  }

  std::vector<std::vector<SearchHit>> per_task(tasks.size());
  parallel_chunks(cfg.tasks, tasks.size(), [&](int, uint64_t begin, uint64_t end) {
    for (uint64_t t = begin; t < end; ++t) {
      auto& sub = tasks[t];
      std::vector<StarFactor> partial = sub.partial;
      detail::next_tuple(sub.next_prime_index, partial, sub.k, cfg,
                         tables[size_t(sub.k - 1)], per_task[t], nullptr);
    }
  });
  for (auto& v : per_task) hits.insert(hits.end(), v.begin(), v.end());
  sort_by_abs_d(hits);
  return hits;
}

// Exhaustive scan: every fundamental D with lo <= |D| < hi and E(D) <= c_max.
inline std::vector<SearchHit> brute_force_range(int c_max, uint64_t lo, uint64_t hi,
                                                int tasks = 0) {
  if (lo < 3) lo = 3;
  if (hi <= lo) return {};
  const uint64_t strip = 1 << 20;
  uint64_t n_strips = (hi - lo + strip - 1) / strip;
  std::vector<std::vector<SearchHit>> per_task;
  per_task.resize(size_t(resolve_tasks(tasks)));
  parallel_chunks(tasks, n_strips, [&](int t, uint64_t begin, uint64_t end) {
    std::vector<SearchHit>& out = per_task[size_t(t)];
    for (uint64_t sidx = begin; sidx < end; ++sidx) {
      uint64_t wlo = lo + sidx * strip;
      uint64_t whi = std::min(hi, wlo + strip);
      auto flags = arith::fundamental_window(wlo, whi);
      for (uint64_t v = wlo; v < whi; ++v) {
        if (!flags[v - wlo]) continue;
        auto e = classgroup::exponent_bounded(-int64_t(v), c_max,
                                              classgroup::ExponentMode::at_most);
        if (!e) continue;
        auto F = arith::factor_fundamental(Int(-int64_t(v)));
        out.push_back(detail::make_hit(Int(-int64_t(v)), *e, F.omega));
      }
    }
  });
  std::vector<SearchHit> hits;
  for (auto& v : per_task) hits.insert(hits.end(), v.begin(), v.end());
  sort_by_abs_d(hits);
  return hits;
}

}  // namespace enumerator
}  // namespace smallexp
