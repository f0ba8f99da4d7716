#include <catch2/catch_amalgamated.hpp>
#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "smallexp/arith.hpp"
#include "smallexp/classgroup.hpp"

using namespace smallexp;
using namespace smallexp::classgroup;

TEST_CASE("class_number: pinned values") {
  CHECK(class_number(-163) == 1);
  CHECK(class_number(-4) == 1);
  CHECK(class_number(-3) == 1);
  CHECK(class_number(-23) == 3);
  CHECK(class_number(-39) == 4);
  CHECK(class_number(-5460) == 16);
  CHECK(class_number(-84) == 4);
}

TEST_CASE("class_number and reduced_forms match the brute scan") {
  for (int64_t v = 3; v <= 20000; ++v) {
    if (!arith::is_fundamental(Int(-v))) continue;
    auto expect = oracles::brute_reduced_forms(-v);
    CAPTURE(v);
    CHECK(class_number(-v) == expect.size());
    auto got = reduced_forms(-v);
    REQUIRE(got.size() == expect.size());
    auto key = [](const quadforms::Form64& f) { return std::tie(f.a, f.b, f.c); };
    std::sort(got.begin(), got.end(),
              [&](auto& x, auto& y) { return key(x) < key(y); });
    std::sort(expect.begin(), expect.end(),
              [&](auto& x, auto& y) { return key(x) < key(y); });
    CHECK(got == expect);
  }
}

TEST_CASE("class_number: spot checks at larger sizes") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 40; ++i) {
    int64_t v = 100000 + int64_t(rng() % 900000);
    if (!arith::is_fundamental(Int(-v))) continue;
    CAPTURE(v);
    CHECK(class_number(-v) == oracles::brute_class_number(-v));
  }
}

TEST_CASE("class_group: pinned structures") {
  auto g1 = class_group(-5460);
  CHECK(g1.h == 16);
  CHECK(g1.divisors == std::vector<uint64_t>{2, 2, 2, 2});
  CHECK(g1.exponent == 2);
  CHECK(g1.two_rank == 4);

  auto g2 = class_group(-39);
  CHECK(g2.h == 4);
  CHECK(g2.divisors == std::vector<uint64_t>{4});
  CHECK(g2.exponent == 4);

  auto g3 = class_group(-84);
  CHECK(g3.h == 4);
  CHECK(g3.divisors == std::vector<uint64_t>{2, 2});
  CHECK(g3.exponent == 2);

  auto g4 = class_group(-3);
  CHECK(g4.h == 1);
  CHECK(g4.exponent == 1);
  CHECK(g4.two_rank == 0);
}

TEST_CASE("class_group invariants against oracles on random discriminants") {
  std::mt19937_64 rng(59);
  int tested = 0;
  while (tested < 120) {
    int64_t v = 3 + int64_t(rng() % 60000);
    if (!arith::is_fundamental(Int(-v))) continue;
    ++tested;
    auto info = class_group(-v);
    uint64_t prod = 1;
    for (size_t i = 0; i < info.divisors.size(); ++i) {
      prod *= info.divisors[i];
      if (i + 1 < info.divisors.size())
        CHECK(info.divisors[i + 1] % info.divisors[i] == 0);  // n_1 | n_2 | ...
    }
    CHECK(prod == info.h);
    CHECK(info.h % info.exponent == 0);
    CHECK((info.exponent == 1) == (info.h == 1));
    CHECK(info.exponent == oracles::brute_exponent(-v));
    auto F = arith::factor_fundamental(Int(-v));
    CHECK(info.two_rank == F.omega - 1);  // genus theory
  }
}

TEST_CASE("exponent: pinned values") {
  CHECK(exponent(-3) == 1);
  CHECK(exponent(-5460) == 2);
  CHECK(exponent(-430950520) == 8);
  CHECK(exponent(-4027) == 3);
  CHECK(exponent(-37363) == 5);
  CHECK(exponent(-118843) == 7);
}

TEST_CASE("exponent equals the max order over early prime forms") {
  std::mt19937_64 rng(61);
  int tested = 0;
  while (tested < 60) {
    int64_t v = 3 + int64_t(rng() % 100000);
    if (!arith::is_fundamental(Int(-v))) continue;
    ++tested;
    uint64_t E = exponent(-v);
    CHECK(class_number(-v) % E == 0);
    // the orders of the first 10 split-prime classes already realize the
    // exponent (their lcm is the order of some element)
    uint64_t L = 1;
    auto qs = quadforms::split_primes(Int(-v), 10);
    for (uint64_t q : qs) {
      auto f = quadforms::prime_form<int64_t>(-v, q);
      L = std::lcm(L, uint64_t(oracles::order_by_table(f, -v)));
    }
    CHECK(E == L);
  }
}

TEST_CASE("exponent_bounded agrees with the exact exponent") {
  std::mt19937_64 rng(67);
  int tested = 0;
  while (tested < 400) {
    int64_t v = 3 + int64_t(rng() % 200000);
    if (!arith::is_fundamental(Int(-v))) continue;
    ++tested;
    uint64_t E = exponent(-v);
    for (int cap : {1, 2, 4, 8}) {
      auto got = exponent_bounded(-v, cap, ExponentMode::at_most);
      if (E <= uint64_t(cap)) {
        REQUIRE(got.has_value());
        CHECK(*got == E);
      } else {
        CHECK_FALSE(got.has_value());
      }
      auto div = exponent_bounded(-v, cap, ExponentMode::divides);
      if (uint64_t(cap) % E == 0) {
        REQUIRE(div.has_value());
        CHECK(*div == E);
      } else {
        CHECK_FALSE(div.has_value());
      }
    }
  }
}

TEST_CASE("scan_reduced_forms sweeps exactly the per-discriminant sets") {
  std::map<uint64_t, std::vector<quadforms::Form64>> from_sweep;
  scan_reduced_forms(3, 6000, [&](uint64_t v, std::span<const FormAB> forms) {
    auto& out = from_sweep[v];
    for (auto& f : forms) {
      int64_t c = (int64_t(f.b) * f.b + int64_t(v)) / (4 * int64_t(f.a));
      out.push_back({int64_t(f.a), int64_t(f.b), c});
    }
  });
  for (int64_t v = 3; v < 6000; ++v) {
    if (!arith::is_fundamental(Int(-v))) continue;
    auto expect = oracles::brute_reduced_forms(-v);
    auto got = from_sweep.count(uint64_t(v)) ? from_sweep[uint64_t(v)]
                                             : std::vector<quadforms::Form64>{};
    auto key = [](const quadforms::Form64& f) { return std::tie(f.a, f.b, f.c); };
    std::sort(got.begin(), got.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
    std::sort(expect.begin(), expect.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
    CAPTURE(v);
    CHECK(got == expect);
  }
}

TEST_CASE("max_supported_abs_d covers the desk range") {
  CHECK(max_supported_abs_d() >= 3000000000000ULL);
}
