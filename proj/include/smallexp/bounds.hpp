#pragma once

// Closed-form lower bounds on class numbers and the derived search ceilings.
//
// All real evaluation happens in 50-digit software floats with decimal
// string constants, so results are identical on every platform. Comparisons
// that feed pruning are guarded: computed lower bounds are shaded down by a
// relative 1e-30 before being compared against thresholds, so a ceiling can
// only ever come out larger (pruning less), never smaller.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "int_types.hpp"
#include "primes.hpp"

namespace smallexp {
namespace bounds {

inline const Real& real_pi() {
  static const Real v = 4 * atan(Real(1));
  return v;
}
inline const Real& real_e() {
  static const Real v = exp(Real(1));
  return v;
}

namespace detail {
inline const Real& c_0655() {
  static const Real v("0.655");
  return v;
}
inline const Real& c_7732() {
  static const Real v("7.732");
  return v;
}
inline const Real& c_1881() {
  static const Real v("1.881");
  return v;
}
inline const Real& guard() {
  static const Real v = 1 - Real("1e-30");
  return v;
}
inline const Real& log_1e6() {
  static const Real v = log(Real(1000000));
  return v;
}
}  // namespace detail

// Square of the ERH split-prime bound: a split prime p <= this value exists
// once |D| > e^25.
inline Real bach_split_prime_bound(const Int& absD) {
  if (Real(absD) <= exp(Real(25)))
    throw std::invalid_argument("bach_split_prime_bound: requires |D| > e^25");
  Real t = detail::c_1881() * log(Real(absD)) + 2 * Real("0.34") + Real("5.5");
  return t * t;
}

// Largest X for which some |D| <= X could still have exponent c under ERH;
// for all |D| > X the bound forces E(D) > c. Rows 1..3 are stored constants
// from the weaker small-discriminant estimates of the same source; they are
// not recomputable from the formula above.
inline Int erh_discriminant_bound(int c) {
  if (c < 1 || c > 8) throw std::invalid_argument("erh_discriminant_bound: c in 1..8");
  if (c == 1) return Int(1700);
  if (c == 2) return Int(6000000);
  if (c == 3) return Int("97000000000");
  // least X with 4 * bach(|D|)^c < |D| for all |D| > X; the ratio is
  // monotone on the search range so an integer binary search applies
  auto holds = [&](const Int& X) {
    Real b = bach_split_prime_bound(X);
    Real p = b;
    for (int i = 1; i < c; ++i) p *= b;
    return 4 * p < Real(X);
  };
  Int lo = Int("72004899338");  // just above e^25
  Int hi = Int("100000000000000000000000000000000000000000");  // 1e41
  if (!holds(hi)) throw std::logic_error("erh_discriminant_bound: range exhausted");
  while (hi - lo > 1) {
    Int mid = (lo + hi) / 2;
    if (holds(mid))
      hi = mid;
    else
      lo = mid;
  }
  return lo;  // for all |D| > lo the inequality holds
}

// h(D) > 0.655/(pi e) * sqrt(|D|)/log|D| for |D| > e^11.2, valid when
// L(s,chi) has no real zero in [1 - 1/(4 log|D|), 1).
inline Real tatuzawa_h_lower(const Int& absD) {
  Real x(absD);
  if (x <= exp(Real("11.2")))
    throw std::invalid_argument("tatuzawa_h_lower: requires |D| > e^11.2");
  return detail::c_0655() / (real_pi() * real_e()) * sqrt(x) / log(x);
}

// h(D) > 0.655/(pi log A) * |D|^(1/2 - 1/log A) for all |D| >= A with at
// most one exception.
inline Real tatuzawa_one_exception_lower(const Int& A, const Int& absD) {
  Real a(A), x(absD);
  if (a < exp(Real("11.2")))
    throw std::invalid_argument("tatuzawa_one_exception_lower: A >= e^11.2 required");
  if (x < a) throw std::invalid_argument("tatuzawa_one_exception_lower: |D| >= A required");
  Real la = log(a);
  Real expo = Real(1) / 2 - 1 / la;
  return detail::c_0655() / (real_pi() * la) * exp(expo * log(x));
}

// Chen's bound with A = 10^6: valid for all |D| >= 10^6 with at most one
// exception. Increasing in |D| (both branches are), which the ceiling
// searches rely on.
inline Real chen_h_lower(const Int& absD) {
  if (absD < 1000000) throw std::invalid_argument("chen_h_lower: requires |D| >= 10^6");
  Real x(absD);
  Real lx = log(x);
  Real m = lx / detail::log_1e6();
  Real first = sqrt(x) / (real_pi() * detail::c_7732() * lx);
  Real second = m * Real(1500000) * sqrt(x) / (real_pi() * exp(m) * lx);
  return first < second ? first : second;
}

// Smallest N with d_N >= e^11.2, p_N^(1/2 - 1/log d_N) >= 2^r, and
// 0.655/(pi e) * sqrt(d_N)/log d_N >= 2^(r(N-1)). Beyond d_N there is at
// most one field with E(D) = 2^r.
inline std::pair<int, Int> compute_N(int r) {
  if (r < 1) throw std::invalid_argument("compute_N: r >= 1");
  Int d = 1;
  for (int N = 1;; ++N) {
    uint64_t pN = nth_prime(size_t(N));
    d *= pN;
    Real dr(d);
    Real ld = log(dr);
    if (dr < exp(Real("11.2"))) continue;
    Real cond2 = exp((Real(1) / 2 - 1 / ld) * log(Real(pN)));
    Real two_r = exp2(Real(r));
    if (cond2 < two_r) continue;
    Real lhs = detail::c_0655() / (real_pi() * real_e()) * sqrt(dr) / ld;
    Real rhs = exp2(Real(r) * (N - 1));
    if (lhs < rhs) continue;
    return {N, d};
  }
}

// Maximal h(D) when E(D) = 2^r and omega(D) prime factors: 2^(r(omega-1)).
inline Int genus_class_number_cap(int r, int omega) {
  if (r < 1 || omega < 1) throw std::invalid_argument("genus_class_number_cap: r, omega >= 1");
  return Int(1) << (uint64_t(r) * uint64_t(omega - 1));
}

enum class BoundMode {
  chen_one_exception,      // complete with at most one exception
  tatuzawa_no_siegel_zero  // complete if no Siegel zeros exist
};

inline const char* bound_mode_name(BoundMode m) {
  return m == BoundMode::chen_one_exception ? "chen" : "tatuzawa";
}

inline Real h_lower(BoundMode mode, const Int& absD) {
  return mode == BoundMode::chen_one_exception ? chen_h_lower(absD) : tatuzawa_h_lower(absD);
}

// Ceilings B_0..B_{k-1}: for every |D| > B_l the selected lower bound on
// h(D) exceeds 2^l * c^(k-1-l), the largest order an exponent-c class group
// with Redei rank l can have.
struct BoundTable {
  int c = 0;
  int k = 0;
  BoundMode mode = BoundMode::chen_one_exception;
  std::vector<Int> ceilings;
};

inline Int threshold_for_rank(int c, int k, int rank) {
  Int t = Int(1) << rank;
  for (int i = 0; i < k - 1 - rank; ++i) t *= c;
  return t;
}

inline BoundTable bound_table(int c, int k, BoundMode mode = BoundMode::chen_one_exception) {
  if (c != 2 && c != 4 && c != 8) throw std::invalid_argument("bound_table: c in {2,4,8}");
  if (k < 1) throw std::invalid_argument("bound_table: k >= 1");
  BoundTable t;
  t.c = c;
  t.k = k;
  t.mode = mode;
  const Int floor_clamp(1000000);
  static const Int domain_cap = [] {
    Int x = 10;
    Int r = 1;
    for (int i = 0; i < 130; ++i) r *= x;
    return r;  // 1e130, beyond (1e6)^19.2 coverage
  }();
  for (int rank = 0; rank < k; ++rank) {
    Real target(threshold_for_rank(c, k, rank));
    auto exceeds = [&](const Int& X) { return h_lower(mode, X) * detail::guard() > target; };
    Int B;
    if (exceeds(floor_clamp)) {
      B = floor_clamp;
    } else {
      Int lo = floor_clamp, hi = domain_cap;
      if (!exceeds(hi)) throw std::logic_error("bound_table: ceiling beyond supported domain");
      while (hi - lo > 1) {
        Int mid = (lo + hi) / 2;
        if (exceeds(mid))
          hi = mid;
        else
          lo = mid;
      }
      B = lo;  // largest X where the bound does not yet exceed the threshold
    }
    t.ceilings.push_back(B);
  }
  return t;
}

}  // namespace bounds
}  // namespace smallexp
