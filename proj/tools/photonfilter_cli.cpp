#include <algorithm>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "photonfilter/csv.hpp"
#include "photonfilter/validate.hpp"

namespace {

struct CommonOpts {
  std::string config_path, preset, out;
  CLI::Option *opt_t_final = nullptr, *opt_dt = nullptr, *opt_stride = nullptr;
  CLI::Option *opt_seed = nullptr, *opt_n = nullptr, *opt_threads = nullptr;
  double t_final = 0.0, dt = 0.0;
  int stride = 0, n_traj = 0, threads = 0;
  std::uint64_t seed = 0;

  void add_config(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Key-value config file");
    cmd->add_option("--preset", preset, "Built-in experiment preset (atom-2photon-a/b/c/d)");
    opt_t_final = cmd->add_option("--t-final", t_final, "Integration horizon");
    opt_dt = cmd->add_option("--dt", dt, "Time step");
    opt_stride = cmd->add_option("--stride", stride, "Output decimation");
  }
  void add_detection(CLI::App* cmd) {
    opt_seed = cmd->add_option("--seed", seed, "Base RNG seed");
    opt_threads = cmd->add_option("--threads", threads, "Worker threads (0 = auto)");
  }

  pf::RunConfig load() const {
    pf::RunConfig cfg;
    if (!preset.empty() && !config_path.empty())
      throw std::invalid_argument("give either --config or --preset, not both");
    if (!preset.empty())
      cfg = pf::preset_config(preset);
    else if (!config_path.empty())
      cfg = pf::parse_config(config_path);
    else
      throw std::invalid_argument("one of --config or --preset is required");
    if (opt_t_final->count()) cfg.t_final = t_final;
    if (opt_dt->count()) cfg.dt = dt;
    if (opt_stride->count()) cfg.stride = stride;
    if (opt_seed && opt_seed->count()) cfg.seed = seed;
    if (opt_n && opt_n->count()) cfg.N = n_traj;
    if (opt_threads && opt_threads->count()) cfg.threads = threads;
    return cfg;
  }
};

pf::Matrix snapshot_observable(const pf::RunConfig& cfg) {
  if (!cfg.observables.empty()) return cfg.observables.front().X;
  return pf::Matrix::Identity(cfg.dim, cfg.dim);
}

int run_master(const CommonOpts& opts) {
  const pf::RunConfig cfg = opts.load();
  const pf::SystemModel model = pf::build_model(cfg);
  const pf::PulseSet pulses = pf::build_pulses(cfg);
  const pf::MasterSeries series = pf::integrate_master(model, pulses, cfg.t_final, cfg.dt,
                                                       cfg.stride);
  pf::write_snapshot_csv(opts.out, series, snapshot_observable(cfg));
  if (!cfg.observables.empty()) {
    const std::vector<double> top = series.top_series(cfg.observables.front().X);
    const double peak = *std::max_element(top.begin(), top.end());
    std::printf("master: %zu snapshots, peak %s = %.6f\n", series.times.size(),
                cfg.observables.front().label.c_str(), peak);
  } else {
    std::printf("master: %zu snapshots\n", series.times.size());
  }
  return 0;
}

int run_filter_homodyne(const CommonOpts& opts, const std::string& replay_path, bool renormalize) {
  pf::RunConfig cfg = opts.load();
  if (renormalize) cfg.renormalize = true;
  const pf::SystemModel model = pf::build_model(cfg);
  const pf::PulseSet pulses = pf::build_pulses(cfg);
  const pf::HierarchyEngine eng(model, pulses);
  pf::TrajectoryRecord rec;
  if (!replay_path.empty()) {
    const std::vector<double> dY = pf::read_value_column(replay_path);
    rec = pf::replay_homodyne(eng, cfg.t_final, cfg.dt, dY, cfg.observables, cfg.renormalize);
  } else {
    rec = pf::simulate_homodyne(eng, cfg.t_final, cfg.dt, cfg.seed, cfg.observables,
                                cfg.renormalize);
  }
  pf::write_trajectory_csv(opts.out, rec);
  std::printf("homodyne trajectory: %zu steps, seed %llu, %d imaginary-part warnings\n",
              rec.dY.size(), static_cast<unsigned long long>(rec.seed), rec.im_warnings);
  return 0;
}

int run_filter_photocount(const CommonOpts& opts, const std::string& replay_path) {
  const pf::RunConfig cfg = opts.load();
  const pf::SystemModel model = pf::build_model(cfg);
  const pf::PulseSet pulses = pf::build_pulses(cfg);
  const pf::HierarchyEngine eng(model, pulses);
  pf::JumpRecord rec;
  if (!replay_path.empty()) {
    const std::vector<double> jumps = pf::read_value_column(replay_path);
    rec = pf::replay_photocount(eng, cfg.t_final, cfg.dt, jumps, cfg.observables);
  } else {
    rec = pf::simulate_photocount(eng, cfg.t_final, cfg.dt, cfg.seed, cfg.observables);
  }
  pf::write_jump_csv(opts.out, rec);
  pf::write_jump_times(opts.out + ".jumps", rec);
  std::printf("photocount trajectory: %d counts, seed %llu, %d high-rate warnings\n",
              rec.counts.back(), static_cast<unsigned long long>(rec.seed), rec.rate_warnings);
  return 0;
}

int run_ensemble_cmd(const CommonOpts& opts, const std::string& mode) {
  pf::RunConfig cfg = opts.load();
  if (mode == "homodyne")
    cfg.detection = pf::Detection::homodyne;
  else if (mode == "photocount")
    cfg.detection = pf::Detection::photocount;
  else if (!mode.empty())
    throw std::invalid_argument("--mode must be homodyne or photocount");
  const pf::SystemModel model = pf::build_model(cfg);
  const pf::PulseSet pulses = pf::build_pulses(cfg);
  pf::EnsembleSpec spec;
  spec.base_seed = cfg.seed;
  spec.N = cfg.N;
  spec.detection = cfg.detection;
  spec.observables = cfg.observables;
  spec.stride = cfg.stride;
  spec.threads = cfg.threads;
  const pf::EnsembleSummary summary = pf::run_ensemble(spec, model, pulses, cfg.t_final, cfg.dt);
  pf::write_summary_csv(opts.out, summary);
  pf::write_metadata_sidecar(opts.out + ".meta", cfg, &summary);
  std::printf("ensemble: N = %d, failures = %d, wall %.2f s\n", summary.requested_N,
              summary.failures, summary.wall_seconds);
  for (std::size_t o = 0; o < summary.labels.size(); ++o)
    std::printf("  sup-norm to master, %s: %.5f\n", summary.labels[o].c_str(),
                summary.sup_norm_obs[o]);
  if (cfg.detection == pf::Detection::photocount)
    std::printf("  mean total counts: %.4f\n", summary.mean_total_counts);
  return 0;
}

int run_validate(std::uint64_t seed) {
  const pf::ValidationReport rep = pf::run_validation_suite(seed);
  for (const auto& c : rep.checks)
    std::printf("%s  %s (deviation %.3e, tolerance %.0e)\n", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.deviation, c.tol);
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum stochastic filtering for n-photon wavepacket inputs"};
  app.require_subcommand(1);
  int rc = 0;

  CommonOpts master_opts;
  CLI::App* master = app.add_subcommand("master", "Integrate the deterministic hierarchy");
  master_opts.add_config(master);
  master->add_option("--out", master_opts.out, "Snapshot CSV path")->required();
  master->callback([&] { rc = run_master(master_opts); });

  CommonOpts hom_opts;
  std::string hom_replay;
  bool hom_renorm = false;
  CLI::App* hom = app.add_subcommand("filter-homodyne", "Run one homodyne trajectory");
  hom_opts.add_config(hom);
  hom_opts.add_detection(hom);
  hom->add_option("--out", hom_opts.out, "Trajectory CSV path")->required();
  hom->add_option("--replay", hom_replay, "Replay a single-column dY file");
  hom->add_flag("--renormalize", hom_renorm, "Renormalize the top trace each step");
  hom->callback([&] { rc = run_filter_homodyne(hom_opts, hom_replay, hom_renorm); });

  CommonOpts cnt_opts;
  std::string cnt_replay;
  CLI::App* cnt = app.add_subcommand("filter-photocount", "Run one photocounting trajectory");
  cnt_opts.add_config(cnt);
  cnt_opts.add_detection(cnt);
  cnt->add_option("--out", cnt_opts.out, "Jump CSV path (jump times in <out>.jumps)")->required();
  cnt->add_option("--replay", cnt_replay, "Replay a newline-separated jump-times file");
  cnt->callback([&] { rc = run_filter_photocount(cnt_opts, cnt_replay); });

  CommonOpts ens_opts;
  std::string ens_mode;
  CLI::App* ens = app.add_subcommand("ensemble", "Aggregate many trajectories");
  ens_opts.add_config(ens);
  ens_opts.add_detection(ens);
  ens_opts.opt_n = ens->add_option("-N,--trajectories", ens_opts.n_traj, "Trajectory count");
  ens->add_option("--mode", ens_mode, "Detection mode override (homodyne/photocount)");
  ens->add_option("--out", ens_opts.out, "Summary CSV path (metadata in <out>.meta)")->required();
  ens->callback([&] { rc = run_ensemble_cmd(ens_opts, ens_mode); });

  std::uint64_t val_seed = 20240901;
  CLI::App* val = app.add_subcommand("validate", "Run the internal oracle suite");
  val->add_option("--seed", val_seed, "Seed for the randomized checks");
  val->callback([&] { rc = run_validate(val_seed); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
