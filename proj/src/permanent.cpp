#include "photonfilter/permanent.hpp"

#include <stdexcept>
#include <vector>

namespace pf {

Complex permanent(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("permanent requires a square matrix");
  const int k = static_cast<int>(m.rows());
  if (k == 0) return Complex(1.0, 0.0);
  if (k > 30) throw std::invalid_argument("permanent limited to k <= 30");

  // perm(A) = (-1)^k sum_{S != {}} (-1)^{|S|} prod_i sum_{j in S} A_ij,
  // visiting the subsets S in Gray-code order so each step updates one column.
  std::vector<Complex> rowsum(k, Complex(0.0, 0.0));
  Complex total(0.0, 0.0);
  std::uint32_t gray = 0;
  for (std::uint32_t g = 1; g < (1u << k); ++g) {
    const std::uint32_t next = g ^ (g >> 1);
    const int j = __builtin_ctz(gray ^ next);
    const double dir = (next >> j & 1u) ? 1.0 : -1.0;
    for (int i = 0; i < k; ++i) rowsum[i] += dir * m(i, j);
    gray = next;
    Complex prod(1.0, 0.0);
    for (int i = 0; i < k; ++i) prod *= rowsum[i];
    total += (__builtin_popcount(gray) & 1) ? -prod : prod;
  }
  return (k & 1) ? -total : total;
}

}  // namespace pf
