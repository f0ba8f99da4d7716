// Command-line front end: class-group inspection, the analytic bound tables,
// and the three searches (exhaustive range, split-prime direct search,
// bit-vector sieve), with CSV / JSON-lines output.
//
// Exit codes: 0 success, 2 configuration error, 3 internal consistency
// failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "smallexp/smallexp.hpp"

using namespace smallexp;

namespace {

struct OutputOpts {
  std::string path;  // empty: stdout
  bool json = false;
};

template <class Records>
void emit(const OutputOpts& o, const Records& recs) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!o.path.empty()) {
    file.open(o.path);
    if (!file) throw std::invalid_argument("cannot open output file: " + o.path);
    os = &file;
  }
  if (o.json)
    write_jsonl(*os, recs);
  else
    write_csv(*os, recs);
}

Int parse_int(const std::string& s) {
  try {
    return Int(s);
  } catch (...) {
    throw std::invalid_argument("not a decimal integer: " + s);
  }
}

bounds::BoundMode parse_mode(const std::string& s) {
  if (s == "chen") return bounds::BoundMode::chen_one_exception;
  if (s == "tatuzawa") return bounds::BoundMode::tatuzawa_no_siegel_zero;
  throw std::invalid_argument("bound mode must be chen or tatuzawa");
}

// Split sorted primes into three groups with balanced log-products (the
// grouping used by the sieve's CRT loop).
std::array<std::vector<uint32_t>, 3> partition_modulus_primes(std::vector<uint32_t> primes) {
  std::sort(primes.begin(), primes.end());
  double total = 0;
  for (uint32_t p : primes) total += std::log(double(p));
  std::array<std::vector<uint32_t>, 3> groups;
  size_t idx = 0;
  double used = 0;
  for (int g = 0; g < 3; ++g) {
    double target = (total - used) / double(3 - g);
    double acc = 0;
    while (idx < primes.size()) {
      double l = std::log(double(primes[idx]));
      if (g < 2 && !groups[size_t(g)].empty() && acc + l > target) break;
      groups[size_t(g)].push_back(primes[idx]);
      acc += l;
      ++idx;
    }
    used += acc;
  }
  return groups;
}

int cmd_bounds(int c, int k, bool json) {
  std::optional<std::pair<int, Int>> N;
  std::optional<bounds::BoundTable> table;
  if (c == 2 || c == 4 || c == 8) {
    int r = c == 2 ? 1 : c == 4 ? 2 : 3;
    N = bounds::compute_N(r);
    if (k == 0) k = N->first;
    table = bounds::bound_table(c, k);
  }
  Int erh = bounds::erh_discriminant_bound(c);
  if (json) {
    std::cout << "{\"exponent\":" << c << ",\"erh_bound\":\"" << erh << "\"";
    if (N) std::cout << ",\"N\":" << N->first << ",\"d_N\":\"" << N->second << "\"";
    if (table) {
      std::cout << ",\"k\":" << k << ",\"ceilings\":[";
      for (size_t i = 0; i < table->ceilings.size(); ++i)
        std::cout << (i ? "," : "") << "\"" << table->ceilings[i] << "\"";
      std::cout << "]";
    }
    std::cout << "}\n";
  } else {
    std::cout << "exponent " << c << "\n";
    std::cout << "ERH discriminant bound: " << erh << "\n";
    if (N) {
      std::cout << "N_" << c << " = " << N->first << "\n";
      std::cout << "d_N = " << N->second << "\n";
    }
    if (table) {
      std::cout << "ceilings B_l (k = " << k << "):\n";
      for (size_t l = 0; l < table->ceilings.size(); ++l)
        std::cout << "  B_" << l << " = " << table->ceilings[l] << "\n";
    }
  }
  return 0;
}

int cmd_redei(const Int& d) {
  auto F = arith::factor_fundamental(d);
  auto M = redei::redei_matrix(F);
  std::cout << "D = " << d << " = ";
  for (size_t i = 0; i < F.factors.size(); ++i)
    std::cout << (i ? " * " : "") << F.factors[i].value;
  std::cout << "\n";
  for (int i = 0; i < M.k; ++i) {
    std::cout << "  ";
    for (int j = 0; j < M.k; ++j) std::cout << ((M.rows[size_t(i)] >> j) & 1);
    std::cout << "\n";
  }
  std::cout << "rank = " << redei::gf2_rank(M.rows) << "\n";
  std::cout << "4-rank = " << redei::four_rank(F) << "\n";
  return 0;
}

int cmd_classgroup(const Int& d) {
  if ((abs(d) >> 62) != 0) throw std::invalid_argument("classgroup: |D| too large");
  auto info = classgroup::class_group(int64_t(d));
  std::cout << "D = " << d << "\n";
  std::cout << "h = " << info.h << "\n";
  std::cout << "structure:";
  if (info.divisors.empty()) std::cout << " trivial";
  for (auto n : info.divisors) std::cout << " C" << n;
  std::cout << "\n";
  std::cout << "exponent = " << info.exponent << "\n";
  std::cout << "2-rank = " << info.two_rank << "\n";
  return 0;
}

int cmd_verify(const Int& d) {
  if (d >= 0 || !arith::is_fundamental(d)) {
    std::cout << "not a negative fundamental discriminant: " << d << "\n";
    try {
      Int fund = arith::fundamentalize(d);
      std::cout << "the field Q(sqrt(" << d << ")) has discriminant " << fund << "\n";
    } catch (...) {
    }
    return 2;
  }
  auto F = arith::factor_fundamental(d);
  auto M = redei::redei_matrix(F);
  int rank = redei::gf2_rank(M.rows);
  int r4 = redei::four_rank(F);
  std::cout << "D = " << d << "\n";
  std::cout << "factorization:";
  for (auto& f : F.factors) std::cout << " " << f.value;
  std::cout << "  (omega = " << F.omega << ")\n";
  std::cout << "redei rank = " << rank << ", 4-rank = " << r4 << "\n";
  bool consistent = true;
  if ((abs(d) >> 62) == 0 && uint64_t(abs(d)) <= classgroup::max_supported_abs_d()) {
    auto info = classgroup::class_group(int64_t(d));
    std::cout << "h = " << info.h << "\n";
    std::cout << "structure:";
    if (info.divisors.empty()) std::cout << " trivial";
    for (auto n : info.divisors) std::cout << " C" << n;
    std::cout << "\n";
    std::cout << "exponent = " << info.exponent << "\n";
    uint64_t prod = 1;
    int div4 = 0, even = 0;
    for (auto n : info.divisors) {
      prod *= n;
      if (n % 4 == 0) ++div4;
      if (n % 2 == 0) ++even;
    }
    if (prod != info.h) consistent = false;
    if (even != F.omega - 1) consistent = false;
    if (div4 != r4) consistent = false;
    auto scan = classgroup::exponent_bounded(int64_t(d), int(info.exponent),
                                             classgroup::ExponentMode::at_most);
    if (!scan || *scan != info.exponent) consistent = false;
  } else {
    std::cout << "(class group beyond supported range; structural checks only)\n";
  }
  uint64_t ssp = quadforms::smallest_split_prime(d);
  std::cout << "smallest split prime = " << ssp << "\n";
  std::cout << (consistent ? "consistent\n" : "INCONSISTENT\n");
  return consistent ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"imaginary quadratic fields with class groups of small exponent"};
  app.require_subcommand(1);

  // bounds
  auto* sb = app.add_subcommand("bounds", "analytic bounds and search ceilings");
  int b_c = 8, b_k = 0;
  bool b_json = false;
  sb->add_option("--exponent", b_c, "exponent c (1..8)")->required();
  sb->add_option("--k", b_k, "number of prime factors for the ceiling table");
  sb->add_flag("--json", b_json);

  // redei
  auto* sr = app.add_subcommand("redei", "Redei matrix, rank and 4-rank");
  std::string r_disc;
  sr->add_option("--disc", r_disc, "negative fundamental discriminant")->required();

  // classgroup
  auto* sc = app.add_subcommand("classgroup", "class number and structure");
  std::string c_disc;
  sc->add_option("--disc", c_disc)->required();

  // brute-force
  auto* sbr = app.add_subcommand("brute-force", "exhaustive scan of a |D| range");
  std::string br_lo = "3", br_hi, br_out;
  int br_cmax = 8, br_tasks = 0;
  bool br_json = false;
  sbr->add_option("--lo", br_lo);
  sbr->add_option("--hi", br_hi)->required();
  sbr->add_option("--c-max", br_cmax);
  sbr->add_option("--tasks", br_tasks);
  sbr->add_option("--out", br_out);
  sbr->add_flag("--json", br_json);

  // enumerate
  auto* se = app.add_subcommand("enumerate", "recursive enumeration by factor count");
  int e_c = 8, e_k = 0, e_tasks = 0;
  std::string e_mode = "chen", e_max, e_cutoff = "1000000", e_out;
  bool e_json = false;
  se->add_option("--exponent", e_c)->required();
  se->add_option("--bound-mode", e_mode);
  se->add_option("--k", e_k, "maximal number of prime factors (default: threshold)");
  se->add_option("--max-abs-d", e_max);
  se->add_option("--cutoff", e_cutoff, "lower |D| cutoff (default 10^6)");
  se->add_option("--tasks", e_tasks);
  se->add_option("--out", e_out);
  se->add_flag("--json", e_json);

  // direct-search
  auto* sd = app.add_subcommand("direct-search", "fields by smallest split prime");
  uint64_t d_maxp = 197;
  int d_c = 8, d_tasks = 0;
  std::string d_out;
  bool d_json = false;
  sd->add_option("--max-prime", d_maxp);
  sd->add_option("--exponent", d_c);
  sd->add_option("--tasks", d_tasks);
  sd->add_option("--out", d_out);
  sd->add_flag("--json", d_json);

  // sieve
  auto* ss = app.add_subcommand("sieve", "bit-vector sieve for fields with no small split prime");
  std::string s_bound, s_lo = "0", s_out;
  bool s_paper = false, s_json = false;
  std::vector<uint32_t> s_modprimes;
  uint32_t s_sievemax = 0;
  int s_tasks = 0, s_c = 8;
  ss->add_option("--abs-bound", s_bound, "search |D| < bound");
  ss->add_option("--abs-lo", s_lo, "lower edge of the window");
  ss->add_flag("--paper-scale", s_paper, "full configuration: |D| < 3.1e20, primes <= 193");
  ss->add_option("--modulus-primes", s_modprimes)->delimiter(',');
  ss->add_option("--sieve-primes-max", s_sievemax);
  ss->add_option("--exponent", s_c);
  ss->add_option("--tasks", s_tasks);
  ss->add_option("--out", s_out);
  ss->add_flag("--json", s_json);

  // table1
  auto* st = app.add_subcommand("table1", "per-exponent summary table");
  std::string t_max = "10000000";
  bool t_ds = false;
  int t_tasks = 0;
  st->add_option("--max-abs-d", t_max);
  st->add_flag("--direct-search", t_ds, "merge the split-prime search results");
  st->add_option("--tasks", t_tasks);

  // verify
  auto* sv = app.add_subcommand("verify", "verify one discriminant end to end");
  std::string v_disc;
  sv->add_option("--disc", v_disc)->required();

  try {
    app.parse(argc, argv);

    if (sb->parsed()) return cmd_bounds(b_c, b_k, b_json);
    if (sr->parsed()) return cmd_redei(parse_int(r_disc));
    if (sc->parsed()) return cmd_classgroup(parse_int(c_disc));
    if (sv->parsed()) return cmd_verify(parse_int(v_disc));

    if (sbr->parsed()) {
      Int lo = parse_int(br_lo), hi = parse_int(br_hi);
      if (lo < 0 || hi < lo || (hi >> 62) != 0)
        throw std::invalid_argument("brute-force: bad range");
      auto hits = enumerator::brute_force_range(br_cmax, uint64_t(lo), uint64_t(hi), br_tasks);
      std::cerr << "regime: unconditional (exhaustive scan of [" << lo << ", " << hi << "))\n";
      emit(OutputOpts{br_out, br_json}, hits);
      return 0;
    }

    if (se->parsed()) {
      enumerator::SearchConfig cfg;
      cfg.c = e_c;
      cfg.k_max = e_k;
      cfg.mode = parse_mode(e_mode);
      cfg.lower_cutoff = parse_int(e_cutoff);
      if (!e_max.empty()) cfg.max_abs_d = parse_int(e_max);
      cfg.tasks = e_tasks;
      if (cfg.c == 8 && cfg.max_abs_d == 0 && cfg.k_max == 0)
        std::cerr << "full exponent-8 enumeration: expect tens of core-hours\n";
      auto hits = enumerator::enumerate_exponent(cfg);
      std::cerr << report::regime_line(cfg.mode) << "\n";
      emit(OutputOpts{e_out, e_json}, hits);
      return 0;
    }

    if (sd->parsed()) {
      auto hits = directsearch::direct_search(d_maxp, d_c, d_tasks);
      std::cerr << "regime: unconditional for fields with smallest split prime <= " << d_maxp
                << "\n";
      emit(OutputOpts{d_out, d_json}, hits);
      return 0;
    }

    if (ss->parsed()) {
      sieve::SieveConfig cfg = s_paper ? sieve::SieveConfig::paper() : sieve::SieveConfig::desk();
      if (!s_modprimes.empty()) cfg.modulus_groups = partition_modulus_primes(s_modprimes);
      if (s_sievemax) cfg.sieve_prime_max = s_sievemax;
      if (!s_bound.empty()) cfg.abs_hi = to_uint128(parse_int(s_bound));
      cfg.abs_lo = to_uint128(parse_int(s_lo));
      cfg.exponent = s_c;
      cfg.tasks = s_tasks;
      if (s_paper)
        std::cerr << "paper-scale sieve: about 40 core-days of work; interrupt freely\n";
      auto recs = sieve::sieve_run(cfg);
      std::cerr << "regime: exhaustive for the window; survivors have no split prime <= "
                << cfg.sieve_prime_max << "\n";
      emit(OutputOpts{s_out, s_json}, recs);
      return 0;
    }

    if (st->parsed()) {
      report::Table1Options opts;
      opts.max_abs_d = parse_int(t_max);
      opts.merge_direct_search = t_ds;
      opts.tasks = t_tasks;
      auto rep = report::run_table1(opts);
      std::cout << rep.render();
      return 0;
    }

    return 2;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
