#pragma once

#include "photonfilter/normalization.hpp"
#include "photonfilter/system_model.hpp"

namespace pf {

// Hierarchy of reduced density-like operators rho^{l;r}, indexed by pairs of
// subsets of {1..n}. Only canonical pairs (subset_rank(l) <= subset_rank(r))
// are stored; the rest follow from rho^{l;r} = (rho^{r;l})^dagger. Storage is
// the upper triangle over 0-based ranks, row-major.
class DensityHierarchy {
 public:
  DensityHierarchy() = default;
  DensityHierarchy(int n, int dim);

  int n() const { return n_; }
  int dim() const { return dim_; }
  int subset_count() const { return m_; }
  int pair_count() const { return m_ * (m_ + 1) / 2; }

  // Requires rank_a <= rank_b (0-based ranks).
  int pair_index(int rank_a, int rank_b) const {
    return rank_a * m_ - rank_a * (rank_a - 1) / 2 + (rank_b - rank_a);
  }

  Matrix& comp(int pair_idx) { return comps_[pair_idx]; }
  const Matrix& comp(int pair_idx) const { return comps_[pair_idx]; }

  // rho^{l;r} for arbitrary rank order; materializes the adjoint when needed.
  Matrix fetch(int rank_l, int rank_r) const;

  std::vector<Matrix>& components() { return comps_; }
  const std::vector<Matrix>& components() const { return comps_; }

  // The top pair (l = r = empty set: no photons annihilated) is stored first.
  static constexpr int top_index() { return 0; }

 private:
  int n_ = 0;
  int dim_ = 0;
  int m_ = 1;  // 2^n
  std::vector<Matrix> comps_;
};

// Every canonical component (l;r) starts at <Phi_r|Phi_l> |eta><eta|.
DensityHierarchy init_hierarchy(const SystemModel& model, const PulseSet& pulses);

// Tr[(rho^{l;r})^dagger X], ranks 0-based; accepts non-canonical order.
Complex expectation(const DensityHierarchy& h, const Matrix& X, int rank_l, int rank_r);
Complex expectation(const DensityHierarchy& h, const Matrix& X, const SubsetIndex& l,
                    const SubsetIndex& r);
Complex expectation_top(const DensityHierarchy& h, const Matrix& X);

}  // namespace pf
