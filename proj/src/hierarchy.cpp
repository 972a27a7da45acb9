#include "photonfilter/hierarchy.hpp"

#include <stdexcept>

namespace pf {

DensityHierarchy::DensityHierarchy(int n, int dim) : n_(n), dim_(dim), m_(1 << n) {
  comps_.assign(pair_count(), Matrix::Zero(dim, dim));
}

Matrix DensityHierarchy::fetch(int rank_l, int rank_r) const {
  if (rank_l <= rank_r) return comps_[pair_index(rank_l, rank_r)];
  return comps_[pair_index(rank_r, rank_l)].adjoint();
}

DensityHierarchy init_hierarchy(const SystemModel& model, const PulseSet& pulses) {
  const int n = pulses.n();
  DensityHierarchy h(n, model.dim());
  const Matrix rho0 = model.initial_state * model.initial_state.adjoint();
  const NormalizationTable table(pulses);
  const auto subs = enumerate_subsets(n);
  for (int a = 0; a < h.subset_count(); ++a)
    for (int b = a; b < h.subset_count(); ++b)
      h.comp(h.pair_index(a, b)) = state_overlap(pulses, table, subs[b], subs[a]) * rho0;
  return h;
}

Complex expectation(const DensityHierarchy& h, const Matrix& X, int rank_l, int rank_r) {
  if (X.rows() != h.dim() || X.cols() != h.dim())
    throw std::invalid_argument("observable dimension mismatch");
  return (h.fetch(rank_l, rank_r).adjoint() * X).trace();
}

Complex expectation(const DensityHierarchy& h, const Matrix& X, const SubsetIndex& l,
                    const SubsetIndex& r) {
  return expectation(h, X, subset_rank(l) - 1, subset_rank(r) - 1);
}

Complex expectation_top(const DensityHierarchy& h, const Matrix& X) {
  return expectation(h, X, 0, 0);
}

}  // namespace pf
