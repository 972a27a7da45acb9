#include "photonfilter/normalization.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "photonfilter/permanent.hpp"

namespace pf {

namespace {

Matrix gram_submatrix(const Matrix& g, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = g(rows[i], cols[j]);
  return out;
}

std::vector<int> complement_list(int n, std::uint32_t bits) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!(bits >> i & 1u)) out.push_back(i);
  return out;
}

}  // namespace

NormalizationTable::NormalizationTable(const PulseSet& pulses) {
  n_ = pulses.n();
  if (n_ > 10) throw std::invalid_argument("photon count capped at n = 10");
  gram_ = gram_matrix(pulses);
  const std::uint32_t count = 1u << n_;
  values_.resize(count);
  for (std::uint32_t b = 0; b < count; ++b) {
    const auto comp = complement_list(n_, b);
    const Complex p = permanent(gram_submatrix(gram_, comp, comp));
    if (!(p.real() > 0.0)) {
      std::ostringstream os;
      os << "normalization N for subset bits=" << b << " is not positive: " << p.real();
      throw std::invalid_argument(os.str());
    }
    values_[b] = p.real();
  }
  ratios_.assign(std::size_t(count) * std::max(n_, 1), 0.0);
  for (std::uint32_t b = 0; b < count; ++b)
    for (int mu = 1; mu <= n_; ++mu)
      if (!(b >> (mu - 1) & 1u))
        ratios_[b * n_ + (mu - 1)] = std::sqrt(values_[b | (1u << (mu - 1))] / values_[b]);
}

double normalization(const PulseSet& pulses, const SubsetIndex& r) {
  return NormalizationTable(pulses).value(r);
}

std::vector<std::pair<int, Complex>> annihilation_coefficients(const PulseSet& pulses,
                                                               const NormalizationTable& table,
                                                               const SubsetIndex& r, double t) {
  std::vector<std::pair<int, Complex>> out;
  for (int mu = 1; mu <= r.n; ++mu)
    if (!(r.bits >> (mu - 1) & 1u))
      out.emplace_back(mu, table.step_ratio(r.bits, mu) * pulses.value(mu - 1, t));
  return out;
}

std::vector<std::pair<int, Complex>> annihilation_coefficients(const PulseSet& pulses,
                                                               const SubsetIndex& r, double t) {
  return annihilation_coefficients(pulses, NormalizationTable(pulses), r, t);
}

Complex state_overlap(const PulseSet&, const NormalizationTable& table,
                      const SubsetIndex& l, const SubsetIndex& r) {
  if (l.k() != r.k()) return Complex(0.0, 0.0);
  const int n = table.n();
  const auto cl = complement_list(n, l.bits);
  const auto cr = complement_list(n, r.bits);
  const Complex p = permanent(gram_submatrix(table.gram(), cl, cr));
  return p / std::sqrt(table.value(l.bits) * table.value(r.bits));
}

Complex state_overlap(const PulseSet& pulses, const SubsetIndex& l, const SubsetIndex& r) {
  return state_overlap(pulses, NormalizationTable(pulses), l, r);
}

}  // namespace pf
