#pragma once

#include <cstdint>

#include "photonfilter/engine.hpp"

namespace pf {

// One photocounting trajectory. counts holds cumulative N(t) at every time
// point; conditional[i] tracks Re Tr[(rho^top)^dagger X_i].
struct JumpRecord {
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<int> counts;
  std::vector<double> jump_times;  // strictly increasing within [0, t_final]
  std::vector<std::string> labels;
  std::vector<std::vector<double>> conditional;
  std::vector<double> trace_drift;
  int rate_warnings = 0;  // steps with lambda dt > 0.1
};

struct PhotocountStepInfo {
  double lambda_t = 0.0;  // Re Tr[J^top]
  bool jumped = false;
};

// jumped=false: drift step, components advance by
//   (master drift - J^{l;r} + lambda_t rho^{l;r}) dt    (top trace preserved).
// jumped=true: rho^{l;r} <- J^{l;r} / lambda_t, all components sharing the
// single normalization. Errors with "jump at vanishing rate" when lambda_t
// is below rate_floor and a jump is requested.
PhotocountStepInfo photocount_step(const HierarchyEngine& eng, DensityHierarchy& h, double t,
                                   double dt, bool jumped, double rate_floor = 1e-12);

// Bernoulli thinning: jump in [t, t+dt) with probability lambda_t dt, drawn
// from the counter-based generator keyed by (seed, step).
JumpRecord simulate_photocount(const HierarchyEngine& eng, double t_final, double dt,
                               std::uint64_t seed, const std::vector<Observable>& observables,
                               double rate_floor = 1e-12);

// Replays an external list of jump times (ascending).
JumpRecord replay_photocount(const HierarchyEngine& eng, double t_final, double dt,
                             const std::vector<double>& jump_times,
                             const std::vector<Observable>& observables,
                             double rate_floor = 1e-12);

}  // namespace pf
