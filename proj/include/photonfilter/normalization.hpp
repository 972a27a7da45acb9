#pragma once

#include <utility>

#include "photonfilter/pulse.hpp"
#include "photonfilter/subset.hpp"

namespace pf {

// N^{n-k}_{r_k} = perm(Gram restricted to the complement of r_k), for every
// subset r of {1..n}. All values are positive; the full set gives 1 and any
// (n-1)-subset gives a pulse self-overlap (= 1 on normalized pulses).
// Built once per run, then shared immutably.
class NormalizationTable {
 public:
  NormalizationTable() = default;
  explicit NormalizationTable(const PulseSet& pulses);

  int n() const { return n_; }
  const Matrix& gram() const { return gram_; }

  double value(std::uint32_t r_bits) const { return values_[r_bits]; }
  double value(const SubsetIndex& r) const { return values_[r.bits]; }

  // sqrt(N_{r u {mu}} / N_r) for 1-based mu not in r.
  double step_ratio(std::uint32_t r_bits, int mu) const {
    return ratios_[r_bits * n_ + (mu - 1)];
  }

 private:
  int n_ = 0;
  Matrix gram_;
  std::vector<double> values_;
  std::vector<double> ratios_;
};

double normalization(const PulseSet& pulses, const SubsetIndex& r);

// c_mu(r,t) = sqrt(N_{r mu} / N_r) xi_mu(t), one entry per mu not in r in
// ascending order; empty when r is the full set.
std::vector<std::pair<int, Complex>> annihilation_coefficients(const PulseSet& pulses,
                                                               const NormalizationTable& table,
                                                               const SubsetIndex& r, double t);
std::vector<std::pair<int, Complex>> annihilation_coefficients(const PulseSet& pulses,
                                                               const SubsetIndex& r, double t);

// <Phi^{n-j}_{l} | Phi^{n-k}_{r}>: 0 unless j == k, otherwise
// perm(G[comp(l), comp(r)]) / sqrt(N_l N_r).
Complex state_overlap(const PulseSet& pulses, const NormalizationTable& table,
                      const SubsetIndex& l, const SubsetIndex& r);
Complex state_overlap(const PulseSet& pulses, const SubsetIndex& l, const SubsetIndex& r);

}  // namespace pf
