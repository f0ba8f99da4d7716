#pragma once

// Redei matrices over GF(2). For D = p_1* ... p_k* the matrix M = (c_ij) has
// (-1)^(c_ij) = (p_j*/p_i) off the diagonal, and c_ii is the row sum of the
// other entries; k - 1 - rank(M) is the 4-rank of Cl(D). The partial-matrix
// minimum rank (free diagonal) is the pruning bound used by the enumeration.

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "arith.hpp"
#include "int_types.hpp"

namespace smallexp {
namespace redei {

struct RedeiMatrix {
  int k = 0;
  std::vector<uint64_t> rows;  // bit j of rows[i] = c_ij
  int neg_count = 0;           // t = number of negative star factors
};

// Rank over GF(2); rows are bit vectors of width <= 64.
inline int gf2_rank(std::vector<uint64_t> rows) {
  int rank = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    uint64_t r = rows[i];
    if (r == 0) continue;
    ++rank;
    uint64_t low = r & (~r + 1);
    for (size_t j = i + 1; j < rows.size(); ++j)
      if (rows[j] & low) rows[j] ^= r;
  }
  return rank;
}

namespace detail {

inline int gf2_rank_at_most(const std::vector<uint64_t>& rows_in, int bound) {
  // early exit when the rank reaches `bound`
  std::vector<uint64_t> rows(rows_in);
  int rank = 0;
  for (size_t i = 0; i < rows.size() && rank < bound; ++i) {
    uint64_t r = rows[i];
    if (r == 0) continue;
    ++rank;
    uint64_t low = r & (~r + 1);
    for (size_t j = i + 1; j < rows.size(); ++j)
      if (rows[j] & low) rows[j] ^= r;
  }
  return rank;
}

}  // namespace detail

inline RedeiMatrix redei_matrix(const arith::FundamentalDiscriminant& F) {
  int k = F.omega;
  if (k > 64) throw std::invalid_argument("redei_matrix: more than 64 prime factors");
  RedeiMatrix M;
  M.k = k;
  M.rows.assign(size_t(k), 0);
  for (int i = 0; i < k; ++i) {
    if (F.factors[i].value < 0) ++M.neg_count;
    uint64_t diag = 0;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      int s = arith::kronecker_int(F.factors[j].value, F.factors[i].prime);
      uint64_t bit = (s == -1) ? 1 : 0;
      M.rows[i] |= bit << j;
      diag ^= bit;
    }
    M.rows[i] |= diag << i;
  }
  return M;
}

inline int four_rank(const arith::FundamentalDiscriminant& F) {
  auto M = redei_matrix(F);
  return M.k - 1 - gf2_rank(M.rows);
}

// Product (p_i*/p_j)(p_j*/p_i); by reciprocity -1 iff both star values are
// negative. Undefined for the star value -4.
inline int reciprocity_pair(const arith::PrimeStarDisc& pi, const arith::PrimeStarDisc& pj) {
  if (pi.value == -4 || pj.value == -4)
    throw std::invalid_argument("reciprocity_pair: star value -4 not allowed");
  if (pi.prime == pj.prime) throw std::invalid_argument("reciprocity_pair: primes must differ");
  return arith::kronecker_int(pi.value, pj.prime) * arith::kronecker_int(pj.value, pi.prime);
}

// Sum of the rows of the Redei matrix, as a bit vector (bit j = d_j).
inline uint64_t row_sum_vector(const arith::FundamentalDiscriminant& F) {
  auto M = redei_matrix(F);
  uint64_t d = 0;
  for (uint64_t r : M.rows) d ^= r;
  return d;
}

// Minimum GF(2) rank over all diagonal completions of an l x l matrix whose
// off-diagonal entries are given (bit j of offdiag[i], diagonal bits clear).
// Exhaustive below l = 21; above, a valid lower bound from diagonal-free
// submatrices is returned instead.
inline int min_rank_free_diagonal(const std::vector<uint64_t>& offdiag) {
  int l = int(offdiag.size());
  if (l == 0) return 0;
  if (l > 20) {
    // rank of any completion is at least the rank of a submatrix that avoids
    // the diagonal; take the better of the two half splits
    int half = l / 2;
    std::vector<uint64_t> top, bottom;
    uint64_t hi_mask = ((l == 64 ? ~uint64_t(0) : (uint64_t(1) << l) - 1)) & ~((uint64_t(1) << half) - 1);
    uint64_t lo_mask = (uint64_t(1) << half) - 1;
    for (int i = 0; i < half; ++i) top.push_back(offdiag[i] & hi_mask);
    for (int i = half; i < l; ++i) bottom.push_back(offdiag[i] & lo_mask);
    return std::max(gf2_rank(top), gf2_rank(bottom));
  }

  static thread_local std::unordered_map<uint64_t, int> memo;
  uint64_t key = 0;
  bool use_memo = l <= 8;
  if (use_memo) {
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j) {
        if (i == j) continue;
        key = (key << 1) | ((offdiag[i] >> j) & 1);
      }
    key |= uint64_t(l) << 56;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }

  int best = l;
  std::vector<uint64_t> rows(offdiag);
  for (uint64_t mask = 0; mask < (uint64_t(1) << l) && best > 0; ++mask) {
    for (int i = 0; i < l; ++i)
      rows[i] = (offdiag[i] & ~(uint64_t(1) << i)) | (((mask >> i) & 1) << i);
    int r = detail::gf2_rank_at_most(rows, best);
    if (r < best) best = r;
  }
  if (use_memo) memo.emplace(key, best);
  return best;
}

// Lower bound for the rank of the Redei matrix of every discriminant with
// more prime factors that is divisible by the given partial star product.
inline int lower_redei_bound(const std::vector<arith::PrimeStarDisc>& partial) {
  int l = int(partial.size());
  if (l == 0) return 0;
  if (l > 64) throw std::invalid_argument("lower_redei_bound: too many factors");
  std::vector<uint64_t> offdiag(size_t(l), 0);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      if (i == j) continue;
      int s = arith::kronecker_int(partial[j].value, partial[i].prime);
      if (s == -1) offdiag[i] |= uint64_t(1) << j;
    }
  return min_rank_free_diagonal(offdiag);
}

}  // namespace redei
}  // namespace smallexp
