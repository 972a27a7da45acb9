#pragma once

#include "photonfilter/homodyne.hpp"
#include "photonfilter/pulse.hpp"
#include "photonfilter/system_model.hpp"

namespace pf {

// Independent Fock-state ladder (all photons share one profile xi). Kept
// deliberately separate from the subset machinery: the full (n+1) x (n+1)
// grid of components rho^{p;q} is stored and the ladder recursion
//   d rho^{p;q} = D_00 rho^{p;q} + sqrt(q) conj(xi) D_10 rho^{p;q-1}
//               + sqrt(p) xi D_01 rho^{p-1;q} + sqrt(pq) |xi|^2 D_11 rho^{p-1;q-1}
// is coded directly, so it can serve as a cross-check for the general engine.
class FockLadder {
 public:
  FockLadder(const SystemModel& model, const PulseSet& pulses, int n_photons);

  int n() const { return n_; }
  int dim() const { return model_.dim(); }
  const SystemModel& model() const { return model_; }

  Matrix& comp(int p, int q) { return comps_[p * (n_ + 1) + q]; }
  const Matrix& comp(int p, int q) const { return comps_[p * (n_ + 1) + q]; }
  const Matrix& top() const { return comp(n_, n_); }

  void master_rhs(const std::vector<Matrix>& comps, double t, std::vector<Matrix>& out) const;
  void rk4_step(double t, double dt);

  // S-bar ladder: L rho^{p;q} + rho^{p;q} L^* + sqrt(q) conj(xi) rho^{p;q-1} S^*
  //               + sqrt(p) xi S rho^{p-1;q}
  Matrix sbar(int p, int q, double t) const;

  // Same Euler-Maruyama contract as homodyne_step, over the ladder.
  HomodyneStepInfo filter_step(double t, double dt, double dY);

  std::vector<Matrix>& components() { return comps_; }

 private:
  SystemModel model_;
  PulseSet pulses_;
  int n_ = 0;
  std::vector<Matrix> comps_;
  Complex xi(double t) const { return pulses_.n() > 0 ? pulses_.value(0, t) : Complex(0.0, 0.0); }
};

// fock_filter_step / simulate over a ladder with synthesized record.
TrajectoryRecord simulate_fock_homodyne(const SystemModel& model, const PulseSet& pulses,
                                        int n_photons, double t_final, double dt,
                                        std::uint64_t seed,
                                        const std::vector<Observable>& observables);

// Replay with an external record (shared-record cross checks).
TrajectoryRecord replay_fock_homodyne(const SystemModel& model, const PulseSet& pulses,
                                      int n_photons, double t_final, double dt,
                                      const std::vector<double>& dY,
                                      const std::vector<Observable>& observables);

}  // namespace pf
