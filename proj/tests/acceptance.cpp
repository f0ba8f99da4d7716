// Acceptance suite: one pass/fail line per criterion, non-zero exit when any
// fails. Heavier than the unit suites; expect some minutes of work.
//
//  1. exhaustive table below 10^7 (counts and largest fields per exponent)
//  2. split-prime direct search at 197 / exponent 8
//  3. the nine large discriminants all verify to exponent 8
//  4. factor-count thresholds N = 11 / 24 / 58 with primorial caps
//  5. ERH ceiling table rows (recomputed, 2 significant figures)
//  6. sieve residue-class count identity
//  7. sieve windows against the brute-force oracle, bit-exact
//  8. enumeration (c = 8) against brute force on 10^6 < |D| <= 10^9
//  9. property battery (module invariants at full stated ranges)
// 10. full-scale claims recorded in the run report

#include <chrono>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "smallexp/smallexp.hpp"

using namespace smallexp;

namespace {

int g_failures = 0;

class Criterion {
 public:
  Criterion(int number, std::string name)
      : number_(number), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      problems_.push_back(what);
    }
  }

  template <class A, class B>
  void expect_eq(const A& a, const B& b, const std::string& what) {
    if (!(a == b)) {
      std::ostringstream os;
      os << what << " (got " << a << ", want " << b << ")";
      problems_.push_back(os.str());
    }
  }

  ~Criterion() {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start_)
                  .count();
    if (problems_.empty()) {
      std::printf("PASS  criterion %2d  %-52s [%6lld ms]\n", number_, name_.c_str(),
                  (long long)ms);
    } else {
      ++g_failures;
      std::printf("FAIL  criterion %2d  %-52s [%6lld ms]\n", number_, name_.c_str(),
                  (long long)ms);
      for (auto& p : problems_) std::printf("      - %s\n", p.c_str());
    }
    std::fflush(stdout);
  }

 private:
  int number_;
  std::string name_;
  std::vector<std::string> problems_;
  std::chrono::steady_clock::time_point start_;
};

void criterion_1() {
  Criterion c(1, "exhaustive table below 10^7");
  auto hits = enumerator::brute_force_range(8, 3, 10000001);
  std::array<uint64_t, 9> counts{};
  std::array<Int, 9> largest{};
  for (auto& h : hits) {
    counts[size_t(h.exponent)]++;
    if (abs(h.d) > largest[size_t(h.exponent)]) largest[size_t(h.exponent)] = abs(h.d);
  }
  const std::array<uint64_t, 9> expect_counts{0, 9, 56, 17, 203, 27, 432, 33, 769};
  const std::array<int64_t, 8> expect_largest{163,   5460,    4027,   435435,
                                              37363, 5761140, 118843, 0};
  for (int e = 1; e <= 8; ++e)
    c.expect_eq(counts[size_t(e)], expect_counts[size_t(e)],
                "count for exponent " + std::to_string(e));
  for (int e = 1; e <= 7; ++e)
    c.expect_eq(largest[size_t(e)], Int(expect_largest[size_t(e) - 1]),
                "largest field for exponent " + std::to_string(e));
}

void criterion_2() {
  Criterion c(2, "direct search, max prime 197, exponent 8");
  auto ds = directsearch::direct_search(197, 8);
  uint64_t e8 = 0, e124 = 0;
  Int largest = 0;
  for (auto& h : ds) {
    if (h.exponent == 8) {
      ++e8;
      if (abs(h.d) > largest) largest = abs(h.d);
    } else if (h.exponent == 1 || h.exponent == 2 || h.exponent == 4) {
      ++e124;
    }
  }
  c.expect_eq(e8, uint64_t(778), "fields of exponent 8");
  c.expect_eq(e124, uint64_t(268), "fields of exponent 1, 2 or 4");
  c.expect_eq(largest, Int(430950520), "largest exponent-8 |D|");

  // companion rows: exponents 3, 5, 6, 7 via their own runs
  const std::array<std::pair<int, uint64_t>, 4> rows{
      {{3, 17}, {5, 27}, {6, 432}, {7, 33}}};
  for (auto [cc, want] : rows) {
    auto run = directsearch::direct_search(197, cc);
    uint64_t n = 0;
    for (auto& h : run)
      if (h.exponent == uint64_t(cc)) ++n;
    c.expect_eq(n, want, "fields of exponent " + std::to_string(cc));
  }
}

void criterion_3() {
  Criterion c(3, "nine large discriminants verify to exponent 8");
  const int64_t nine[] = {-11148180,  -12517428, -15337315, -15898740, -17168515,
                          -28663635, -29493555, -31078723, -430950520};
  for (int64_t d : nine) {
    bool fund = arith::is_fundamental(Int(d));
    c.expect(fund, "fundamental " + std::to_string(d));
    if (!fund) continue;
    auto info = classgroup::class_group(d);
    c.expect_eq(info.exponent, uint64_t(8), "exponent of " + std::to_string(d));
    uint64_t prod = 1;
    for (auto n : info.divisors) prod *= n;
    c.expect_eq(prod, info.h, "divisor product of " + std::to_string(d));
    auto scan = classgroup::exponent_bounded(d, 8, classgroup::ExponentMode::at_most);
    c.expect(scan.has_value() && *scan == 8,
             "generator scan agrees for " + std::to_string(d));
  }
}

void criterion_4() {
  Criterion c(4, "factor-count thresholds N_2, N_4, N_8");
  auto [N2, d2] = bounds::compute_N(1);
  auto [N4, d4] = bounds::compute_N(2);
  auto [N8, d8] = bounds::compute_N(3);
  c.expect_eq(N2, 11, "N_2");
  c.expect_eq(N4, 24, "N_4");
  c.expect_eq(N8, 58, "N_8");
  c.expect(d2 <= Int("201000000000"), "d_11 <= 2.01e11");
  c.expect(d4 <= Int("23800000000000000000000000000000000"), "d_24 <= 2.38e34");
  c.expect(d8 <= Int("317") * pow(Int(10), 108), "d_58 <= 3.17e110");
  c.expect(d2 == arith::primorial(11) && d4 == arith::primorial(24) &&
               d8 == arith::primorial(58),
           "d_N are primorials");
}

Int round_up_2sf(Int v) {
  Int unit = 1;
  while (v >= 100) {
    Int q = v / 10;
    bool exact = (q * 10 == v);
    v = exact ? q : q + 1;
    unit *= 10;
  }
  return v * unit;
}

void criterion_5() {
  Criterion c(5, "ERH ceiling table (2 significant figures)");
  c.expect_eq(bounds::erh_discriminant_bound(1), Int(1700), "row 1 (stored)");
  c.expect_eq(bounds::erh_discriminant_bound(2), Int(6000000), "row 2 (stored)");
  c.expect_eq(bounds::erh_discriminant_bound(3), Int("97000000000"), "row 3 (stored)");
  const std::array<std::pair<int, const char*>, 5> rows{{{4, "3400000000000000"},
                                                         {5, "230000000000000000000"},
                                                         {6, "25000000000000000000000000"},
                                                         {7, "3900000000000000000000000000000"},
                                                         {8, "890000000000000000000000000000000000"}}};
  for (auto [cc, want] : rows)
    c.expect_eq(round_up_2sf(bounds::erh_discriminant_bound(cc)), Int(want),
                "recomputed row " + std::to_string(cc));
}

void criterion_6() {
  Criterion c(6, "sieve residue-class count identity");
  uint64_t n1 = sieve::admissible_residues({3, 5, 7, 11, 13, 17}).size();
  uint64_t n2 = sieve::admissible_residues({19, 23, 29, 31}).size();
  uint64_t n3 = sieve::admissible_residues({37, 41, 43, 47}).size();
  uint64_t n16 = sieve::admissible_residues_16().size();
  c.expect_eq(n1, uint64_t(9072), "residues mod 255255");
  c.expect_eq(n2, uint64_t(28800), "residues mod 392863");
  c.expect_eq(n3, uint64_t(210672), "residues mod 3065857");
  c.expect_eq(n16, uint64_t(4), "residues mod 16");
  c.expect_eq(n16 * n1 * n2 * n3, uint64_t(220172127436800ULL), "product");
}

void criterion_7() {
  Criterion c(7, "sieve windows vs brute-force oracle, bit-exact");
  std::mt19937_64 rng(20260810);
  auto ps = primes_upto(97);
  for (int w = 0; w < 3; ++w) {
    uint64_t X = 3 + rng() % (1000000000000ull - 10000000);  // below 10^12
    uint64_t hi = X + 10000000;

    auto cfg = sieve::SieveConfig::desk();
    cfg.abs_lo = X;
    cfg.abs_hi = hi;
    auto recs = sieve::sieve_run(cfg);
    std::set<Int> got;
    for (auto& r : recs) got.insert(r.d);

    std::set<Int> expect;
    auto flags = arith::fundamental_window(X, hi);
    for (uint64_t v = X; v < hi; ++v) {
      if (!flags[v - X]) continue;
      bool split = false;
      for (uint32_t p : *ps) {
        if (p > 97) break;
        if (arith::kronecker(-int64_t(v), p) == 1) {
          split = true;
          break;
        }
      }
      if (!split) expect.insert(Int(-int64_t(v)));
    }
    std::ostringstream os;
    os << "window [" << X << ", " << hi << "): " << expect.size() << " survivors";
    c.expect(got == expect, os.str());
    for (auto& r : recs)
      c.expect(r.smallest_split_prime > 97 && r.exponent_or_minus1 >= 1,
               "record sanity in window");
  }
}

void criterion_8() {
  Criterion c(8, "enumeration vs brute force on 10^6 < |D| <= 10^9");
  enumerator::SearchConfig cfg;
  cfg.c = 8;
  cfg.max_abs_d = 1000000000;
  auto enum_hits = enumerator::enumerate_exponent(cfg);
  std::set<Int> got;
  for (auto& h : enum_hits) got.insert(h.d);

  auto brute = enumerator::brute_force_range(8, 1000001, 1000000001);
  std::set<Int> expect;
  for (auto& h : brute)
    if (8 % h.exponent == 0) expect.insert(h.d);
  c.expect_eq(got.size(), expect.size(), "hit count on the window");
  c.expect(got == expect, "set equality on the window");

  // the nine published >10^7 fields are inside this window, and nothing else
  const int64_t nine[] = {-11148180,  -12517428, -15337315, -15898740, -17168515,
                          -28663635, -29493555, -31078723, -430950520};
  for (int64_t d : nine)
    c.expect(got.count(Int(d)) == 1, "window contains " + std::to_string(d));
  uint64_t above_1e7 = 0;
  for (auto& d : got)
    if (abs(d) > 10000000) ++above_1e7;
  c.expect_eq(above_1e7, uint64_t(9), "hits with more than 7 decimal places");

  // soundness: independent recomputation of every reported exponent
  for (auto& h : enum_hits) {
    auto e = classgroup::exponent_bounded(int64_t(h.d), 8, classgroup::ExponentMode::divides);
    c.expect(e.has_value() && *e == h.exponent, "re-verification of a hit");
  }
}

void criterion_9() {
  {
    Criterion c(9, "properties: class numbers vs brute scan, |D| <= 10^5");
    uint64_t mismatches = 0;
    for (int64_t v = 3; v <= 100000; ++v) {
      if (!arith::is_fundamental(Int(-v))) continue;
      if (classgroup::class_number(-v) != oracles::brute_class_number(-v)) ++mismatches;
    }
    c.expect_eq(mismatches, uint64_t(0), "class-number mismatches");
  }
  {
    Criterion c(9, "properties: Redei 4-rank vs class group, |D| <= 10^6");
    // sweep all reduced forms; N4/N2 counts give the 4-rank of every group
    uint64_t mism_r4 = 0, mism_r2 = 0, mism_rankfloor = 0, checked = 0;
    auto flags = arith::fundamental_window(3, 1000001);
    std::vector<std::pair<uint32_t, int>> fac;
    classgroup::scan_reduced_forms(3, 1000001, [&](uint64_t v, std::span<const classgroup::FormAB> forms) {
      if (!flags[v - 3]) return;
      ++checked;
      uint64_t n2 = 0, n4 = 0;
      for (auto& fab : forms) {
        int64_t a = int64_t(fab.a), b = int64_t(fab.b);
        int64_t cc = (b * b + int64_t(v)) / (4 * a);
        bool ambiguous = (b == 0) || (b == a) || (a == cc);
        if (ambiguous) ++n2;
        quadforms::Form64 f{a, b, cc};
        auto f2 = quadforms::compose(f, f);
        if (quadforms::is_principal(quadforms::compose(f2, f2))) ++n4;
      }
      // factor v by trial division (all prime factors <= 10^3 or one big one)
      uint64_t rest = v;
      std::vector<arith::PrimeStarDisc> stars;
      Int two_part = 1;
      int omega = 0;
      for (uint64_t p = 2; p * p <= rest; ++p) {
        if (rest % p) continue;
        int e = 0;
        while (rest % p == 0) rest /= p, ++e;
        ++omega;
        if (p == 2) continue;  // filled in below from the cofactor sign
        stars.push_back(arith::star(Int(int64_t(p))));
      }
      if (rest > 1) {
        ++omega;
        stars.push_back(arith::star(Int(int64_t(rest))));
      }
      Int prod = 1;
      for (auto& s : stars) prod *= s.value;
      two_part = Int(-int64_t(v)) / prod;
      if (two_part != 1) {
        stars.insert(stars.begin(), arith::PrimeStarDisc{two_part, Int(2)});
      }
      arith::FundamentalDiscriminant F;
      F.d = Int(-int64_t(v));
      F.factors = stars;
      F.omega = int(stars.size());

      // genus: 2-torsion count is 2^(omega-1)
      if (n2 != (uint64_t(1) << (F.omega - 1))) ++mism_r2;
      // Redei: n4/n2 = 2^(4-rank)
      int r4 = redei::four_rank(F);
      if (n4 % n2 != 0 || (n4 / n2) != (uint64_t(1) << r4)) ++mism_r4;
      // rank floor (t-1)/2
      auto M = redei::redei_matrix(F);
      if (redei::gf2_rank(M.rows) < (M.neg_count - 1) / 2) ++mism_rankfloor;
    });
    // fundamental discriminants have density 3/pi^2 + 1/pi^2 ~ 0.304
    c.expect(checked > 300000 && checked < 310000, "saw all fundamental discriminants");
    c.expect_eq(mism_r2, uint64_t(0), "genus 2-rank identity failures");
    c.expect_eq(mism_r4, uint64_t(0), "4-rank oracle failures");
    c.expect_eq(mism_rankfloor, uint64_t(0), "rank floor failures");
  }
  {
    Criterion c(9, "properties: composition laws, Kronecker, Redei bound");
    std::mt19937_64 rng(149);
    // composition group laws on full tables
    int tables = 0;
    uint64_t law_failures = 0;
    while (tables < 50) {
      int64_t v = 3 + int64_t(rng() % 50000);
      if (!arith::is_fundamental(Int(-v))) continue;
      auto forms = oracles::brute_reduced_forms(-v);
      if (forms.size() > 100) continue;
      ++tables;
      std::set<std::tuple<int64_t, int64_t, int64_t>> all;
      for (auto& f : forms) all.insert(std::tuple(f.a, f.b, f.c));
      for (auto& x : forms)
        for (auto& y : forms) {
          auto xy = quadforms::compose(x, y);
          if (!all.count(std::tuple(xy.a, xy.b, xy.c))) ++law_failures;
          if (!(xy == quadforms::compose(y, x))) ++law_failures;
        }
      for (int i = 0; i < 10; ++i) {
        auto& x = forms[rng() % forms.size()];
        auto& y = forms[rng() % forms.size()];
        auto& z = forms[rng() % forms.size()];
        if (!(quadforms::compose(quadforms::compose(x, y), z) ==
              quadforms::compose(x, quadforms::compose(y, z))))
          ++law_failures;
      }
    }
    c.expect_eq(law_failures, uint64_t(0), "group-law failures");

    uint64_t kron_failures = 0;
    for (int i = 0; i < 20000; ++i) {
      int64_t D = int64_t(rng() % 10000000) - 5000000;
      uint64_t m = 1 + rng() % 1000, n = 1 + rng() % 1000;
      if (arith::kronecker(D, m * n) != arith::kronecker(D, m) * arith::kronecker(D, n))
        ++kron_failures;
    }
    c.expect_eq(kron_failures, uint64_t(0), "Kronecker multiplicativity failures");

    // exponent is realized by the first ten split-prime classes
    uint64_t order_failures = 0;
    int order_checked = 0;
    while (order_checked < 2000) {
      int64_t v = 3 + int64_t(rng() % 100000);
      if (!arith::is_fundamental(Int(-v))) continue;
      ++order_checked;
      uint64_t L = 1;
      for (uint64_t q : quadforms::split_primes(Int(-v), 10)) {
        auto f = quadforms::prime_form<int64_t>(-v, q);
        L = std::lcm(L, uint64_t(oracles::order_by_table(f, -v)));
      }
      if (L != classgroup::exponent(-v)) ++order_failures;
    }
    c.expect_eq(order_failures, uint64_t(0), "exponent vs first-10-split-prime orders");

    // lower_redei_bound: soundness + monotonicity on random prefixes
    uint64_t redei_failures = 0;
    auto ps = primes_upto(1000);
    int tested = 0;
    while (tested < 10000) {
      int l = 1 + int(rng() % 4);
      std::set<uint64_t> used{2};
      std::vector<arith::PrimeStarDisc> partial;
      Int prod = (rng() % 2) ? Int(-4) : Int(1);
      if (prod != 1) partial.push_back(arith::PrimeStarDisc{prod, Int(2)});
      for (int i = 0; i < l; ++i) {
        uint64_t p = (*ps)[1 + rng() % 80];
        if (used.count(p)) continue;
        used.insert(p);
        auto s = arith::star(Int(int64_t(p)));
        partial.push_back(s);
        prod *= s.value;
      }
      std::sort(partial.begin(), partial.end(),
                [](auto& x, auto& y) { return x.prime < y.prime; });
      uint64_t q = (*ps)[90 + rng() % 70];
      if (used.count(q)) continue;
      auto sq = arith::star(Int(int64_t(q)));
      Int D = prod * sq.value;
      if (D >= 0 || !arith::is_fundamental(D)) continue;
      ++tested;
      int lb = redei::lower_redei_bound(partial);
      auto F = arith::factor_fundamental(D);
      if (lb > redei::gf2_rank(redei::redei_matrix(F).rows)) ++redei_failures;
      if (partial.back().prime < sq.prime) {
        auto ext = partial;
        ext.push_back(sq);
        if (redei::lower_redei_bound(ext) < lb) ++redei_failures;
      }
    }
    c.expect_eq(redei_failures, uint64_t(0), "Redei bound soundness/monotonicity failures");
  }
}

void criterion_10() {
  Criterion c(10, "full-scale claims recorded in the report");
  c.expect_eq(report::kFullScaleTotalFields, uint64_t(1555), "total fields constant");
  c.expect_eq(report::kFullScaleSieveSurvivors, uint64_t(1002279), "sieve survivors constant");
  report::Table1Options opts;
  opts.max_abs_d = 20000;
  auto rep = report::run_table1(opts);
  auto text = rep.render();
  c.expect(text.find("1555") != std::string::npos, "report names the full-scale total");
  c.expect(text.find("1002279") != std::string::npos, "report names the sieve survivors");
  c.expect(text.find("--paper-scale") != std::string::npos, "report names the sieve config");
  c.expect(text.find("--exponent 8") != std::string::npos, "report names the enumeration config");
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_10();
  criterion_3();
  criterion_1();
  criterion_7();
  criterion_9();
  criterion_2();
  criterion_8();
  auto total =
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("%s  (%lld s total)\n", g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT",
              (long long)total);
  return g_failures == 0 ? 0 : 1;
}
