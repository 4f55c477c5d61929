#ifndef EULERCLASS_COMBINATORICS_HPP
#define EULERCLASS_COMBINATORICS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace eulerclass {

/// Binomial coefficient, exact for the small arguments used here (n <= 32).
inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t c = 1;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

/// Lexicographic rank of a strictly increasing index tuple among all
/// p-subsets of {0,...,n-1}.
inline int subset_rank(int n, std::span<const int> idx) {
  int p = static_cast<int>(idx.size());
  std::int64_t rank = 0;
  int prev = -1;
  for (int s = 0; s < p; ++s) {
    for (int j = prev + 1; j < idx[s]; ++j)
      rank += binomial(n - 1 - j, p - 1 - s);
    prev = idx[s];
  }
  return static_cast<int>(rank);
}

/// Inverse of subset_rank: fills `out` with the increasing tuple of given rank.
inline void subset_unrank(int n, int p, int rank, std::span<int> out) {
  int j = 0;
  for (int s = 0; s < p; ++s) {
    while (true) {
      std::int64_t block = binomial(n - 1 - j, p - 1 - s);
      if (rank < block) break;
      rank -= static_cast<int>(block);
      ++j;
    }
    out[s] = j++;
  }
}

/// Sorts an index tuple in place and returns the permutation sign,
/// or 0 if any index repeats. Insertion sort; tuples here have length <= 6.
inline int sort_with_sign(std::span<int> idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    int v = idx[i];
    std::size_t j = i;
    while (j > 0 && idx[j - 1] > v) {
      idx[j] = idx[j - 1];
      --j;
      sign = -sign;
    }
    idx[j] = v;
  }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i - 1] == idx[i]) return 0;
  return sign;
}

/// Sign of a permutation of {0,...,m-1} by inversion count.
inline int permutation_sign(std::span<const int> perm) {
  int inv = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inv;
  return (inv % 2 == 0) ? 1 : -1;
}

} // namespace eulerclass

#endif
