#pragma once

#include <cstdint>

#include "photonfilter/engine.hpp"

namespace pf {

// One homodyne trajectory at full step resolution. times has steps+1 entries,
// dY one per step; conditional[i] tracks Re Tr[(rho^top)^dagger X_i].
struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<double> dY;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> conditional;
  std::vector<double> trace_drift;  // |Tr rho^top - 1| per time point
  int im_warnings = 0;              // steps with |Im Tr S-bar^top| > 1e-8
};

struct HomodyneStepInfo {
  double m_t = 0.0;        // Re Tr[S-bar^top]
  double im_residue = 0.0; // Im Tr[S-bar^top]
};

// Euler-Maruyama update with measured increment dY over [t, t+dt): every
// canonical component advances by drift*dt + (S-bar^{l;r} - rho^{l;r} m_t)(dY - m_t dt).
// In-place; returns the gain trace used.
HomodyneStepInfo homodyne_step(const HierarchyEngine& eng, DensityHierarchy& h, double t,
                               double dt, double dY, bool renormalize = false);

// Synthesizes the record: dW ~ Normal(0, dt) from the counter-based generator
// keyed by (seed, step), dY = m_t dt + dW. Deterministic given (seed, dt).
TrajectoryRecord simulate_homodyne(const HierarchyEngine& eng, double t_final, double dt,
                                   std::uint64_t seed, const std::vector<Observable>& observables,
                                   bool renormalize = false);

// Replays an externally supplied record; dY.size() must equal t_final/dt.
TrajectoryRecord replay_homodyne(const HierarchyEngine& eng, double t_final, double dt,
                                 const std::vector<double>& dY,
                                 const std::vector<Observable>& observables,
                                 bool renormalize = false);

}  // namespace pf
