#pragma once

// Binary quadratic forms (a, b, c) of negative discriminant: Gauss reduction,
// composition, prime forms, orders of classes. Forms are value types; the
// int64 instantiation (with __int128 intermediates) covers |D| < 2^62, the
// cpp_int instantiation has no size limit.

#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "arith.hpp"
#include "int_types.hpp"
#include "primes.hpp"

namespace smallexp {
namespace quadforms {

template <class I>
struct promote {
  using type = Int;
};
template <>
struct promote<int64_t> {
  using type = int128;
};

template <class I>
struct Form {
  I a{}, b{}, c{};
  bool operator==(const Form&) const = default;
};

using Form64 = Form<int64_t>;
using FormBig = Form<Int>;

template <class I>
Int discriminant(const Form<I>& f) {
  Int b(f.b), a(f.a), c(f.c);
  return b * b - 4 * a * c;
}

template <class I>
bool is_reduced(const Form<I>& f) {
  I ab = f.b < 0 ? I(-f.b) : f.b;
  if (!(ab <= f.a && f.a <= f.c)) return false;
  if ((ab == f.a || f.a == f.c) && f.b < 0) return false;
  return true;
}

namespace detail {

template <class P>
P floordiv(const P& x, const P& y) {
  P q = x / y;
  if (x % y != 0 && ((x < 0) != (y < 0))) q -= 1;
  return q;
}

// Centered residue of b mod 2a in (-a, a].
template <class P>
P center_mod(const P& b, const P& a) {
  P two_a = 2 * a;
  P t = b % two_a;
  if (t > a) t -= two_a;
  if (t <= -a) t += two_a;
  return t;
}

// Reduce (a, b, c) of known discriminant D < 0 in place. c is recomputed
// from D after each step so intermediates never square a large b.
template <class P>
void reduce_in_place(P& a, P& b, P& c, const P& D) {
  if (a <= 0) throw std::invalid_argument("reduce: form must be positive definite");
  b = center_mod(b, a);
  c = (b * b - D) / (4 * a);
  while (a > c) {
    P t = -b;
    a = c;  // rho: (a, b, c) <- (c, -b, a), renormalized
    b = center_mod(t, a);
    c = (b * b - D) / (4 * a);
  }
  if (a == c && b < 0) b = -b;
}

template <class P>
void xgcd(const P& a, const P& b, P& g, P& x, P& y) {
  P old_r = a, r = b, old_x = 1, xx = 0, old_y = 0, yy = 1;
  while (r != 0) {
    P q = old_r / r;
    P t = old_r - q * r;
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

}  // namespace detail

template <class I>
Form<I> reduce(const Form<I>& f) {
  using P = typename promote<I>::type;
  P a = P(f.a), b = P(f.b), c = P(f.c);
  P D = b * b - 4 * a * c;
  if (D >= 0) throw std::invalid_argument("reduce: discriminant must be negative");
  detail::reduce_in_place(a, b, c, D);
  return Form<I>{I(a), I(b), I(c)};
}

template <class I>
Form<I> principal_form(const I& D) {
  I delta = I(int(arith::detail::mod_u64(D, 2)));
  return Form<I>{I(1), delta, I((delta - D) / 4)};
}

template <class I>
bool is_principal(const Form<I>& f) {
  return f.a == 1;  // assumes reduced
}

template <class I>
Form<I> inverse(const Form<I>& f) {
  return reduce(Form<I>{f.a, I(-f.b), f.c});
}

// Gauss composition. Inputs must be reduced forms of the same discriminant;
// output is the reduced representative of the product class.
template <class I>
Form<I> compose(const Form<I>& f1, const Form<I>& f2) {
  using P = typename promote<I>::type;
  P a1 = P(f1.a), b1 = P(f1.b), c1 = P(f1.c);
  P a2 = P(f2.a), b2 = P(f2.b), c2 = P(f2.c);
  P D = b1 * b1 - 4 * a1 * c1;
  if (D != b2 * b2 - 4 * a2 * c2) throw std::invalid_argument("compose: discriminant mismatch");

  P s = (b1 + b2) / 2;
  P m = b2 - s;  // (b2 - b1) / 2

  P F, u, v;
  detail::xgcd(a1, a2, F, u, v);  // F = u*a1 + v*a2
  P Ax, Bx, By;
  if (F == 1) {
    Ax = 1;
    Bx = m * v;
    By = a1;
  } else if (s % F == 0) {
    Ax = F;
    Bx = m * v;
    By = a1 / F;
  } else {
    P x, y;
    detail::xgcd(F, s, Ax, x, y);  // Ax = x*F + y*s
    P H = F / Ax;
    P t0 = ((c1 % H) * v + (c2 % H) * u) % H;
    P l = (t0 * y) % H;
    By = a1 / Ax;
    Bx = (v * m + l * By) / H;
  }
  P Cy = a2 / Ax;
  P Dy = s / Ax;

  P q = detail::floordiv(Bx, By);
  Bx -= q * By;
  P by = By;

  P Cx = (Bx * Cy - m) / By;
  P Cy2 = (Bx == 0) ? P((a2 * by) / a1) : P((Cx * by + m) / Bx);
  P Dx = (Bx * Dy - c2) / By;

  P a3 = by * Cy2;
  P c3 = Bx * Cx - Ax * Dx;
  P b3 = Ax * Dy - Bx * Cy2 - by * Cx;

  detail::reduce_in_place(a3, b3, c3, D);
  return Form<I>{I(a3), I(b3), I(c3)};
}

template <class I>
Form<I> square(const Form<I>& f) {
  return compose(f, f);
}

template <class I>
Form<I> pow_form(const Form<I>& f, uint64_t e) {
  if (e == 0) {
    Int D = discriminant(f);
    if constexpr (std::is_same_v<I, int64_t>)
      return principal_form<int64_t>(static_cast<int64_t>(D));
    else
      return principal_form<Int>(D);
  }
  Form<I> base = f, acc = f;
  bool have = false;
  while (e) {
    if (e & 1) {
      acc = have ? compose(acc, base) : base;
      have = true;
    }
    e >>= 1;
    if (e) base = square(base);
  }
  return acc;
}

// Reduced form representing a prime ideal above q. Requires kronecker(D, q)
// != -1 (split or ramified).
template <class I>
Form<I> prime_form(const I& D, uint64_t q) {
  using P = typename promote<I>::type;
  int k = arith::kronecker(D, q);
  if (k == -1) throw std::invalid_argument("prime_form: q is inert");
  uint64_t b0;
  if (q == 2) {
    uint64_t m16 = arith::detail::mod_u64(D, 16);
    if (k == 1)
      b0 = 1;  // D = 1 mod 8
    else if (m16 == 8)
      b0 = 0;
    else if (m16 == 12)
      b0 = 2;
    else
      throw std::invalid_argument("prime_form: 2 is inert");
  } else {
    uint64_t r = (k == 0) ? 0 : sqrt_mod_prime(arith::detail::mod_u64(D, q), q);
    uint64_t delta = arith::detail::mod_u64(D, 2);
    b0 = (r % 2 == delta % 2) ? r : q - r;
  }
  P a = P(int64_t(q)), b = P(int64_t(b0)), DD = P(D);
  P c = (b * b - DD) / (4 * a);
  detail::reduce_in_place(a, b, c, DD);
  return Form<I>{I(a), I(b), I(c)};
}

// Least e <= cap with f^e principal, or nullopt if the order exceeds cap.
template <class I>
std::optional<int> order_upto(const Form<I>& f, int cap) {
  Form<I> g = f;
  for (int e = 1; e <= cap; ++e) {
    if (is_principal(g)) return e;
    if (e < cap) g = compose(g, f);
  }
  return std::nullopt;
}

// Least split prime of D; the search is capped (a discriminant with no split
// prime below X is a 2^-pi(X) rarity).
template <class T>
uint64_t smallest_split_prime(const T& D, uint64_t cap = 100000) {
  uint32_t limit = 1u << 10;
  for (;;) {
    auto ps = primes_upto(limit);
    for (uint32_t q : *ps) {
      if (q > cap) throw std::runtime_error("smallest_split_prime: no split prime below cap");
      if (arith::kronecker(D, q) == 1) return q;
    }
    if (uint64_t(limit) > cap) throw std::runtime_error("smallest_split_prime: no split prime below cap");
    limit *= 2;
  }
}

// First `count` split primes of D, ascending.
template <class T>
std::vector<uint64_t> split_primes(const T& D, int count, uint64_t cap = 100000) {
  std::vector<uint64_t> out;
  uint32_t limit = 1u << 10;
  for (;;) {
    auto ps = primes_upto(limit);
    for (uint32_t q : *ps) {
      if (q > cap) throw std::runtime_error("split_primes: cap exceeded");
      if (!out.empty() && q <= out.back()) continue;
      if (arith::kronecker(D, q) == 1) {
        out.push_back(q);
        if (int(out.size()) == count) return out;
      }
    }
    if (uint64_t(limit) > cap) throw std::runtime_error("split_primes: cap exceeded");
    limit *= 2;
  }
}

// Lemma-style order bound: true iff q^c < |D|/4, in which case the class of
// a prime ideal above the split prime q has order strictly greater than c.
inline bool order_exceeds(uint64_t q, int c, const Int& D) {
  Int qc = 1;
  for (int i = 0; i < c; ++i) qc *= q;
  return 4 * qc < abs(D);
}

}  // namespace quadforms
}  // namespace smallexp
