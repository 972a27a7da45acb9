#include "photonfilter/subset.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pf {

namespace {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::vector<int> SubsetIndex::members() const {
  std::vector<int> out;
  for (int i = 1; i <= n; ++i)
    if (bits >> (i - 1) & 1u) out.push_back(i);
  return out;
}

SubsetIndex SubsetIndex::from_members(int n, const std::vector<int>& members) {
  if (n < 0 || n > 31) throw std::invalid_argument("subset ambient size out of range");
  SubsetIndex r;
  r.n = n;
  int prev = 0;
  for (int m : members) {
    if (m <= prev || m > n) {
      std::ostringstream os;
      os << "subset members must be strictly increasing within 1.." << n;
      throw std::invalid_argument(os.str());
    }
    r.bits |= 1u << (m - 1);
    prev = m;
  }
  return r;
}

int subset_rank(const SubsetIndex& r) {
  const int n = r.n;
  const int k = r.k();
  long long m = 0;
  for (int i = 0; i < k; ++i) m += binom(n, i);
  // Gamma: count k-subsets lexicographically before r, via the gaps between members.
  const std::vector<int> a = r.members();
  long long before = 0;
  int prev = 0;
  for (int j = 0; j < k; ++j) {
    for (int v = prev + 1; v < a[j]; ++v) before += binom(n - v, k - j - 1);
    prev = a[j];
  }
  return static_cast<int>(m + before + 1);
}

std::vector<SubsetIndex> enumerate_subsets(int n) {
  if (n < 0 || n > 31) throw std::invalid_argument("subset ambient size out of range");
  std::vector<SubsetIndex> subs;
  subs.reserve(std::size_t(1) << n);
  for (std::uint32_t b = 0; b < (1u << n); ++b) subs.push_back(SubsetIndex{n, b});
  std::sort(subs.begin(), subs.end(), [](const SubsetIndex& x, const SubsetIndex& y) {
    if (x.k() != y.k()) return x.k() < y.k();
    return x.members() < y.members();
  });
  return subs;
}

}  // namespace pf
