#pragma once

#include <cstdint>
#include <vector>

namespace pf {

// Ordered subset r_k of {1..n}, stored as a bitmask: bit i-1 set <=> i in r.
// Members are implicitly ascending.
struct SubsetIndex {
  int n = 0;
  std::uint32_t bits = 0;

  int k() const { return __builtin_popcount(bits); }
  std::vector<int> members() const;

  // Validates 1 <= members[0] < ... <= n, no duplicates.
  static SubsetIndex from_members(int n, const std::vector<int>& members);
};

// 1-based position in the size-then-lexicographic order over all 2^n subsets:
// m = C(n,0) + ... + C(n,k-1) + Gamma(r_k) with Gamma the lexicographic rank
// among the k-subsets. The empty set has rank 1.
int subset_rank(const SubsetIndex& r);

// All 2^n subsets listed so that subset_rank(result[m-1]) == m.
std::vector<SubsetIndex> enumerate_subsets(int n);

inline std::uint32_t complement_bits(int n, std::uint32_t bits) {
  return ~bits & ((n >= 32 ? ~0u : (1u << n) - 1u));
}

}  // namespace pf
