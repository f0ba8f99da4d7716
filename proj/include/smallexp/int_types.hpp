#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace smallexp {

// Arbitrary-precision integer (primorials, bound ceilings, large discriminants).
using Int = boost::multiprecision::cpp_int;

// Software float with 50 decimal digits. All analytic bound evaluation runs on
// this type so results are identical across platforms and compilers.
using Real = boost::multiprecision::cpp_bin_float_50;

using int128 = __int128;
using uint128 = unsigned __int128;

inline Int to_int(int128 v) {
  bool neg = v < 0;
  uint128 u = neg ? uint128(-(v + 1)) + 1 : uint128(v);
  Int r = uint64_t(u >> 64);
  r <<= 64;
  r += uint64_t(u);
  return neg ? -r : r;
}

inline Int to_int(uint128 u) {
  Int r = uint64_t(u >> 64);
  r <<= 64;
  r += uint64_t(u);
  return r;
}

inline uint128 to_uint128(const Int& v) {
  if (v < 0 || (v >> 128) != 0) throw std::overflow_error("value does not fit in 128 bits");
  uint128 hi = static_cast<uint64_t>(v >> 64);
  return (hi << 64) | static_cast<uint64_t>(v & 0xffffffffffffffffULL);
}

inline int128 to_int128(const Int& v) {
  Int a = abs(v);
  if ((a >> 126) != 0) throw std::overflow_error("value does not fit in a signed 128-bit word");
  int128 m = int128(to_uint128(a));
  return v < 0 ? -m : m;
}

inline std::string to_string(uint128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(char('0' + int(v % 10)));
    v /= 10;
  }
  return {s.rbegin(), s.rend()};
}

inline std::string to_string(int128 v) {
  if (v < 0) return "-" + to_string(uint128(-(v + 1)) + 1);
  return to_string(uint128(v));
}

}  // namespace smallexp
