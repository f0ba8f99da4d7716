#pragma once

// Result records shared by the searches, and their CSV / JSON-lines forms.
// All integers are emitted in plain decimal so files are bit-reproducible.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "int_types.hpp"

namespace smallexp {

struct SearchHit {
  Int d;  // negative fundamental discriminant
  uint64_t h = 0;
  uint64_t exponent = 0;
  int omega = 0;
  uint64_t smallest_split_prime = 0;

  bool operator==(const SearchHit&) const = default;
};

inline void sort_by_abs_d(std::vector<SearchHit>& hits) {
  std::sort(hits.begin(), hits.end(),
            [](const SearchHit& x, const SearchHit& y) { return abs(x.d) < abs(y.d); });
}

inline constexpr const char* kHitCsvHeader = "D,h,exponent,omega,smallest_split_prime";

inline void write_csv(std::ostream& os, const std::vector<SearchHit>& hits) {
  os << kHitCsvHeader << "\n";
  for (const auto& h : hits)
    os << h.d << "," << h.h << "," << h.exponent << "," << h.omega << ","
       << h.smallest_split_prime << "\n";
}

inline void write_jsonl(std::ostream& os, const std::vector<SearchHit>& hits) {
  for (const auto& h : hits)
    os << "{\"D\":" << h.d << ",\"h\":" << h.h << ",\"exponent\":" << h.exponent
       << ",\"omega\":" << h.omega << ",\"smallest_split_prime\":" << h.smallest_split_prime
       << "}\n";
}

inline std::vector<SearchHit> parse_csv(std::istream& is) {
  std::vector<SearchHit> out;
  std::string line;
  if (!std::getline(is, line)) return out;
  if (line != kHitCsvHeader) throw std::invalid_argument("parse_csv: bad header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    SearchHit h;
    std::getline(ss, field, ',');
    h.d = Int(field);
    std::getline(ss, field, ',');
    h.h = std::stoull(field);
    std::getline(ss, field, ',');
    h.exponent = std::stoull(field);
    std::getline(ss, field, ',');
    h.omega = std::stoi(field);
    std::getline(ss, field, ',');
    h.smallest_split_prime = std::stoull(field);
    out.push_back(std::move(h));
  }
  return out;
}

// Sieve survivor record. exponent_or_minus1 is -1 when the exponent was not
// computed: the 4p^c filter rejected the field, or |D| lies beyond the
// class-group range.
struct SieveRecord {
  Int d;
  uint64_t smallest_split_prime = 0;
  int64_t exponent_or_minus1 = -1;

  bool operator==(const SieveRecord&) const = default;
};

inline constexpr const char* kSieveCsvHeader = "D,smallest_split_prime,exponent_or_minus1";

inline void write_csv(std::ostream& os, const std::vector<SieveRecord>& recs) {
  os << kSieveCsvHeader << "\n";
  for (const auto& r : recs)
    os << r.d << "," << r.smallest_split_prime << "," << r.exponent_or_minus1 << "\n";
}

inline void write_jsonl(std::ostream& os, const std::vector<SieveRecord>& recs) {
  for (const auto& r : recs)
    os << "{\"D\":" << r.d << ",\"smallest_split_prime\":" << r.smallest_split_prime
       << ",\"exponent_or_minus1\":" << r.exponent_or_minus1 << "}\n";
}

inline std::vector<SieveRecord> parse_sieve_csv(std::istream& is) {
  std::vector<SieveRecord> out;
  std::string line;
  if (!std::getline(is, line)) return out;
  if (line != kSieveCsvHeader) throw std::invalid_argument("parse_sieve_csv: bad header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    SieveRecord r;
    std::getline(ss, field, ',');
    r.d = Int(field);
    std::getline(ss, field, ',');
    r.smallest_split_prime = std::stoull(field);
    std::getline(ss, field, ',');
    r.exponent_or_minus1 = std::stoll(field);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace smallexp
