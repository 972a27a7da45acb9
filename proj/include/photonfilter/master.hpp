#pragma once

#include "photonfilter/engine.hpp"

namespace pf {

// Strided snapshots of the deterministic hierarchy evolution.
struct MasterSeries {
  std::vector<double> times;
  std::vector<DensityHierarchy> snapshots;

  // Re Tr[(rho^top)^dagger X] at every snapshot.
  std::vector<double> top_series(const Matrix& X) const;
};

// Classical RK4 over master_rhs with fixed step dt; pulse values at half-steps
// by linear interpolation. Requires dt to divide t_final and dt <= pulse grid
// step. NaN detection aborts with a diagnostic. Snapshots every `stride` steps
// (plus t = 0 and t = t_final).
MasterSeries integrate_master(const SystemModel& model, const PulseSet& pulses, double t_final,
                              double dt, int stride = 1);

}  // namespace pf
