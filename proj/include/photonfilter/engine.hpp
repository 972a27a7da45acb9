#pragma once

#include "photonfilter/hierarchy.hpp"

namespace pf {

// One source term feeding a pair's coupling sum. The stored matrix at `src` is
// used as-is (adj = false) or via its adjoint (adj = true); the scalar weight
// is w times the pulse value of index xi (conjugated where the equations say).
struct Coupling {
  int src;
  double w;
  int xi;  // 0-based pulse index
  bool adj;
};

struct Coupling2 {
  int src;
  double w;
  int xi_nu;  // plain factor
  int xi_mu;  // conjugated factor
  bool adj;
};

struct PairTopology {
  std::uint32_t l_bits = 0, r_bits = 0;
  int rank_l = 0, rank_r = 0;  // 0-based, rank_l <= rank_r
  std::vector<Coupling> t10;   // sum_{mu not in r} conj(c_mu(r,t)) rho^{l; r mu}
  std::vector<Coupling> t01;   // sum_{nu not in l} c_nu(l,t) rho^{l nu; r}
  std::vector<Coupling2> t11;  // sum over both
};

// Immutable coupling structure + coefficient tables shared by the master
// integrator and both filters. Evaluators here operate on dynamic matrices;
// the integrators use dimension-specialized cores built from the same data.
class HierarchyEngine {
 public:
  HierarchyEngine(const SystemModel& model, const PulseSet& pulses);

  const SystemModel& model() const { return model_; }
  const PulseSet& pulses() const { return pulses_; }
  const NormalizationTable& table() const { return table_; }
  const std::vector<SubsetIndex>& subsets() const { return subsets_; }
  const std::vector<PairTopology>& topo() const { return topo_; }

  int n() const { return pulses_.n(); }
  int dim() const { return model_.dim(); }
  int pair_count() const { return static_cast<int>(topo_.size()); }

  void pulse_values(double t, Complex* xs) const;

  DensityHierarchy init() const;

  // d rho^{l;r}/dt = D_00(rho^{l;r}) + D_10(sum10) + D_01(sum01) + D_11(sum11).
  void master_rhs(const DensityHierarchy& h, double t, DensityHierarchy& out) const;
  DensityHierarchy master_rhs(const DensityHierarchy& h, double t) const;

  // Homodyne gain component S-bar^{l;r} = L rho + rho L^* + sum10 S^* + S sum01.
  Matrix sbar(const DensityHierarchy& h, const SubsetIndex& l, const SubsetIndex& r,
              double t) const;

  // Schroedinger jump component, the trace-pairing adjoint of the Heisenberg
  // counting gain: J^{l;r} = L rho L^* + L sum10 S^* + S sum01 L^* + S sum11 S^*.
  Matrix delta_dual(const DensityHierarchy& h, const SubsetIndex& l, const SubsetIndex& r,
                    double t) const;

 private:
  SystemModel model_;
  PulseSet pulses_;
  NormalizationTable table_;
  std::vector<SubsetIndex> subsets_;
  std::vector<int> rank_of_bits_;  // 0-based rank per bitmask
  std::vector<PairTopology> topo_;

  void coupling_sums(const DensityHierarchy& h, const SubsetIndex& l, const SubsetIndex& r,
                     double t, Matrix& sum10, Matrix& sum01, Matrix& sum11) const;
};

}  // namespace pf
