#pragma once

#include "photonfilter/config.hpp"
#include "photonfilter/homodyne.hpp"
#include "photonfilter/master.hpp"
#include "photonfilter/photocount.hpp"

namespace pf {

// One row per (snapshot, canonical pair):
//   t,pair_id_l,pair_id_r,re_tr,im_tr,re_exp_X,im_exp_X
// pair ids are the 1-based subset ranks; exp_X = Tr[(rho^{l;r})^dagger X].
void write_snapshot_csv(const std::string& path, const MasterSeries& series, const Matrix& X);

// t,dY,<labels...>,trace_drift ; the t = 0 row has an empty dY field.
void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec);

// t,n_cum,<labels...>,trace_drift
void write_jump_csv(const std::string& path, const JumpRecord& rec);

// Newline-separated jump times (replay input format).
void write_jump_times(const std::string& path, const JumpRecord& rec);

// t, then mean_<label>,stderr_<label>,master_<label> per observable.
void write_summary_csv(const std::string& path, const EnsembleSummary& s);

// Config echo that re-parses to an equivalent RunConfig, with the run
// statistics attached as comment lines.
void write_metadata_sidecar(const std::string& path, const RunConfig& cfg,
                            const EnsembleSummary* summary);

// One value per non-empty line; '#' comments allowed.
std::vector<double> read_value_column(const std::string& path);

}  // namespace pf
