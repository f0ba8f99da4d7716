#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "oracles.hpp"
#include "smallexp/classgroup.hpp"
#include "smallexp/redei.hpp"

using namespace smallexp;
using namespace smallexp::redei;
using arith::factor_fundamental;

TEST_CASE("redei_matrix: pinned matrices") {
  auto F163 = factor_fundamental(Int(-163));
  auto M163 = redei_matrix(F163);
  CHECK(M163.k == 1);
  CHECK(M163.rows == std::vector<uint64_t>{0});

  auto F84 = factor_fundamental(Int(-84));
  auto M84 = redei_matrix(F84);
  REQUIRE(M84.k == 3);
  // rows (1,1,0), (1,0,1), (1,0,1) as bit vectors (bit j = column j)
  CHECK(M84.rows == std::vector<uint64_t>{0b011, 0b101, 0b101});
  CHECK(M84.neg_count == 3);

  auto F39 = factor_fundamental(Int(-39));
  auto M39 = redei_matrix(F39);
  CHECK(M39.rows == std::vector<uint64_t>{0, 0});
}

TEST_CASE("gf2_rank basics") {
  CHECK(gf2_rank({0, 0, 0}) == 0);
  CHECK(gf2_rank({1, 2, 4}) == 3);
  CHECK(gf2_rank({0b011, 0b101, 0b101}) == 2);
  CHECK(gf2_rank({}) == 0);
}

TEST_CASE("four_rank: pinned values") {
  CHECK(four_rank(factor_fundamental(Int(-163))) == 0);
  CHECK(four_rank(factor_fundamental(Int(-84))) == 0);   // Cl = C2 x C2
  CHECK(four_rank(factor_fundamental(Int(-39))) == 1);   // Cl = C4
}

TEST_CASE("four_rank equals the count of elementary divisors divisible by 4") {
  std::mt19937_64 rng(71);
  int tested = 0;
  while (tested < 200) {
    int64_t v = 3 + int64_t(rng() % 100000);
    if (!arith::is_fundamental(Int(-v))) continue;
    ++tested;
    auto info = classgroup::class_group(-v);
    int div4 = 0;
    for (auto n : info.divisors)
      if (n % 4 == 0) ++div4;
    CAPTURE(v);
    CHECK(four_rank(factor_fundamental(Int(-v))) == div4);
  }
}

TEST_CASE("matrix invariants: diagonal law, column dependence, rank floor") {
  std::mt19937_64 rng(73);
  int tested = 0;
  while (tested < 500) {
    int64_t v = 3 + int64_t(rng() % 1000000);
    if (!arith::is_fundamental(Int(-v))) continue;
    ++tested;
    auto F = factor_fundamental(Int(-v));
    auto M = redei_matrix(F);
    int k = M.k;
    // diagonal = sum of off-diagonal row entries
    for (int i = 0; i < k; ++i) {
      uint64_t row = M.rows[size_t(i)];
      uint64_t offsum = __builtin_popcountll(row & ~(uint64_t(1) << i)) & 1;
      CHECK(((row >> i) & 1) == offsum);
    }
    // last column = sum of the first k-1 columns
    for (int i = 0; i < k; ++i) {
      uint64_t row = M.rows[size_t(i)];
      uint64_t head = __builtin_popcountll(row & ((uint64_t(1) << (k - 1)) - 1)) & 1;
      CHECK(((row >> (k - 1)) & 1) == head);
    }
    CHECK(gf2_rank(M.rows) >= (M.neg_count - 1) / 2);
  }
}

TEST_CASE("reciprocity_pair matches the sign rule") {
  using arith::star;
  CHECK(reciprocity_pair(star(Int(3)), star(Int(7))) == -1);   // both negative stars
  CHECK(reciprocity_pair(star(Int(5)), star(Int(3))) == 1);
  CHECK(reciprocity_pair(star(Int(13)), star(Int(5))) == 1);
  CHECK_THROWS_AS(reciprocity_pair(star(Int(2), -4), star(Int(3))), std::invalid_argument);
  CHECK_THROWS_AS(reciprocity_pair(star(Int(3)), star(Int(3))), std::invalid_argument);

  auto ps = primes_upto(500);
  std::mt19937_64 rng(79);
  for (int i = 0; i < 300; ++i) {
    uint64_t p = (*ps)[1 + rng() % 60];
    uint64_t q = (*ps)[1 + rng() % 60];
    if (p == q) continue;
    auto sp = star(Int(int64_t(p)));
    auto sq = star(Int(int64_t(q)));
    int expect = (sp.value < 0 && sq.value < 0) ? -1 : 1;
    CHECK(reciprocity_pair(sp, sq) == expect);
  }
}

TEST_CASE("row_sum_vector: zero unless the first factor is -4") {
  CHECK(row_sum_vector(factor_fundamental(Int(-39))) == 0);
  CHECK(row_sum_vector(factor_fundamental(Int(-84))) == 0b011);  // (1,1,0)

  std::mt19937_64 rng(83);
  int tested = 0;
  while (tested < 300) {
    int64_t v = 3 + int64_t(rng() % 300000);
    if (!arith::is_fundamental(Int(-v))) continue;
    ++tested;
    auto F = factor_fundamental(Int(-v));
    uint64_t d = row_sum_vector(F);
    if (F.factors[0].value != -4) {
      CHECK(d == 0);
    } else {
      // bit pattern ((2/~D), (2/p_2), ..., (2/p_k)) with ~D = -D/4
      Int tilde = Int(v) / 4;
      uint64_t expect = (arith::kronecker_int(Int(2), tilde) == -1) ? 1 : 0;
      for (int j = 1; j < F.omega; ++j)
        if (arith::kronecker_int(Int(2), F.factors[size_t(j)].prime) == -1)
          expect |= uint64_t(1) << j;
      CHECK(d == expect);
    }
  }
}

TEST_CASE("lower_redei_bound: pinned examples") {
  using arith::star;
  CHECK(lower_redei_bound({star(Int(3))}) == 0);
  CHECK(lower_redei_bound({star(Int(3)), star(Int(7))}) == 1);
  // (13/5) = (5/13) = -1: equal off-diagonal entries, zero diagonal works
  CHECK(arith::kronecker(Int(13), 5) == arith::kronecker(Int(5), 13));
  CHECK(lower_redei_bound({star(Int(5)), star(Int(13))}) ==
        (arith::kronecker(Int(13), 5) == 1 ? 0 : 1));
}

TEST_CASE("lower_redei_bound: soundness and monotonicity") {
  std::mt19937_64 rng(89);
  auto ps = primes_upto(2000);
  int tested = 0;
  while (tested < 400) {
    // random partial star list, then a random full extension
    int l = 1 + int(rng() % 4);
    std::set<uint64_t> used;
    std::vector<arith::PrimeStarDisc> partial;
    Int prod = 1;
    bool bad = false;
    for (int i = 0; i < l; ++i) {
      uint64_t p = (*ps)[rng() % 100];
      if (used.count(p)) {
        bad = true;
        break;
      }
      used.insert(p);
      auto s = p == 2 ? arith::star(Int(2), -4) : arith::star(Int(int64_t(p)));
      partial.push_back(s);
      prod *= s.value;
    }
    if (bad) continue;
    // extend by one more odd prime to a (possibly) fundamental D
    uint64_t q = (*ps)[100 + rng() % 100];
    if (used.count(q)) continue;
    auto sq = arith::star(Int(int64_t(q)));
    Int D = prod * sq.value;
    if (D >= 0 || !arith::is_fundamental(D)) continue;
    ++tested;

    int lb = lower_redei_bound(partial);
    std::vector<arith::PrimeStarDisc> longer = partial;
    longer.push_back(sq);
    std::sort(longer.begin(), longer.end(),
              [](auto& x, auto& y) { return x.prime < y.prime; });
    auto F = factor_fundamental(D);
    int full_rank = gf2_rank(redei_matrix(F).rows);
    CAPTURE(D);
    CHECK(lb <= full_rank);

    // appending never decreases the bound (partial must stay sorted)
    if (partial.back().prime < sq.prime) {
      std::vector<arith::PrimeStarDisc> ext = partial;
      ext.push_back(sq);
      CHECK(lower_redei_bound(ext) >= lb);
    }
  }
}
