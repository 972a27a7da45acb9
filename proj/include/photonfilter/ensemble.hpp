#pragma once

#include <cstdint>

#include "photonfilter/master.hpp"

namespace pf {

enum class Detection { homodyne, photocount };

struct EnsembleSpec {
  std::uint64_t base_seed = 1;
  int N = 1;
  Detection detection = Detection::homodyne;
  std::vector<Observable> observables;  // Hermitian to 1e-12
  int stride = 1;
  bool track_components = false;  // also average every hierarchy component
  int threads = 0;                // 0: PHOTONFILTER_THREADS, else hardware
};

// Aggregated conditional statistics on the strided time grid (same grid as
// integrate_master with the same stride, so the master columns line up).
// Series are indexed [observable][time].
struct EnsembleSummary {
  std::vector<double> times;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> stderr_;
  std::vector<std::vector<double>> master;
  std::vector<std::vector<double>> env_min;  // pointwise trajectory envelope
  std::vector<std::vector<double>> env_max;
  std::vector<double> sup_norm_obs;       // sup_t |mean - master| per observable
  double sup_norm_components = 0.0;       // only meaningful when track_components
  std::vector<std::vector<double>> per_traj_max;  // [observable][trajectory], NaN if failed
  double mean_total_counts = 0.0;         // photocounting only
  int failures = 0;
  int requested_N = 0;
  double wall_seconds = 0.0;
};

// Trajectory i uses seed base_seed + i. Sums are accumulated in fixed blocks
// of 16 trajectories and merged in block order, so the summary is
// byte-identical for any worker count. Trajectories that abort numerically
// are excluded and counted; more than 1% failures raises an error.
EnsembleSummary run_ensemble(const EnsembleSpec& spec, const SystemModel& model,
                             const PulseSet& pulses, double t_final, double dt);

struct ConvergenceRow {
  int N = 0;
  double sup_norm = 0.0;  // max over observables of sup-norm distance to master
};

// ratio_ok[i] checks rows[i] -> rows[i+1] against the 1/sqrt(N) scaling with
// a slack factor of 2 on either side.
struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::vector<bool> ratio_ok;

  bool consistent() const {
    for (bool ok : ratio_ok)
      if (!ok) return false;
    return true;
  }
};

ConvergenceReport convergence_report(const EnsembleSpec& spec, const std::vector<int>& Ns,
                                     const SystemModel& model, const PulseSet& pulses,
                                     double t_final, double dt);

}  // namespace pf
