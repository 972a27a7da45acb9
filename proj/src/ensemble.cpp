#include "photonfilter/ensemble.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "engine_impl.hpp"

namespace pf {

namespace {

constexpr int kBlock = 16;  // reduction granularity fixing the summation order

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PHOTONFILTER_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

int checked_steps(double t_final, double dt, const PulseSet& pulses) {
  if (t_final <= 0.0 || dt <= 0.0) throw std::invalid_argument("need t_final > 0 and dt > 0");
  const double ratio = t_final / dt;
  const long long steps = std::llround(ratio);
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio)
    throw std::invalid_argument("dt must divide t_final");
  if (pulses.n() > 0 && dt > pulses.dt() * (1.0 + 1e-12))
    throw std::invalid_argument("dt must not exceed the pulse grid step");
  return static_cast<int>(steps);
}

void validate_spec(const EnsembleSpec& spec, int dim) {
  if (spec.N < 1) throw std::invalid_argument("ensemble N must be >= 1");
  if (spec.stride < 1) throw std::invalid_argument("stride must be >= 1");
  for (const auto& o : spec.observables) {
    if (o.X.rows() != dim || o.X.cols() != dim)
      throw std::invalid_argument("observable '" + o.label + "' does not match the system dimension");
    if ((o.X - o.X.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("observable '" + o.label + "' is not Hermitian");
  }
}

// Captures Re Tr[(rho^top)^dagger X_o] (and optionally every component) at
// t = 0 and whenever (k+1) % stride == 0 or the run ends, matching the
// snapshot points of integrate_master.
template <int D>
struct Capture {
  int stride = 1, steps = 0, n_obs = 0, t_out = 0;
  const std::vector<detail::Mat<D>>* obs = nullptr;
  double* vals = nullptr;     // [n_obs * t_out], row o starts at o * t_out
  Complex* comps = nullptr;   // [t_out * pairs * d * d] or nullptr
  int out_idx = 0;

  void snap(const std::vector<detail::Mat<D>>& st) {
    for (int o = 0; o < n_obs; ++o) vals[o * t_out + out_idx] = detail::re_expect(st[0], (*obs)[o]);
    if (comps) {
      const int d = static_cast<int>(st[0].rows());
      Complex* dst = comps + static_cast<std::size_t>(out_idx) * st.size() * d * d;
      for (const auto& m : st)
        for (int c = 0; c < d; ++c)
          for (int r = 0; r < d; ++r) *dst++ = m(r, c);
    }
    ++out_idx;
  }
  bool wants(int k) const { return (k + 1) % stride == 0 || k + 1 == steps; }
};

template <int D>
struct HomodyneSink : Capture<D> {
  void start(const std::vector<detail::Mat<D>>& st) { this->snap(st); }
  void step(int k, double, double, double, double, const std::vector<detail::Mat<D>>& st) {
    if (this->wants(k)) this->snap(st);
  }
};

template <int D>
struct PhotocountSink : Capture<D> {
  int n_cum = 0;
  void start(const std::vector<detail::Mat<D>>& st) { this->snap(st); }
  void step(int k, double, bool jumped, double, const std::vector<detail::Mat<D>>& st) {
    if (jumped) ++n_cum;
    if (this->wants(k)) this->snap(st);
  }
};

struct BlockAccum {
  std::vector<double> sum, sumsq, env_min, env_max;
  std::vector<Complex> comp_sum;
  double counts_sum = 0.0;
  int successes = 0;
  std::vector<int> failed;
  std::string first_error;
};

template <int D>
EnsembleSummary run_impl(const EnsembleSpec& spec, const SystemModel& model,
                         const PulseSet& pulses, double t_final, double dt, int steps) {
  const auto t_start = std::chrono::steady_clock::now();
  const HierarchyEngine eng(model, pulses);
  const detail::Core<D> cm(eng);
  const detail::PulseTable pt = detail::build_pulse_table(pulses, steps, dt, 1);
  const DensityHierarchy h0 = eng.init();

  const int n_obs = static_cast<int>(spec.observables.size());
  std::vector<detail::Mat<D>> obs;
  obs.reserve(spec.observables.size());
  for (const auto& o : spec.observables) obs.push_back(detail::Mat<D>(o.X));

  int t_out = 1;
  for (int k = 0; k < steps; ++k)
    if ((k + 1) % spec.stride == 0 || k + 1 == steps) ++t_out;
  const std::size_t series_len = static_cast<std::size_t>(n_obs) * t_out;
  const std::size_t comp_len =
      spec.track_components
          ? static_cast<std::size_t>(t_out) * cm.pairs * cm.d * cm.d
          : 0;

  const int nblocks = (spec.N + kBlock - 1) / kBlock;
  std::vector<BlockAccum> acc(nblocks);
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> per_traj_max(static_cast<std::size_t>(n_obs) * spec.N, kNaN);

  std::atomic<int> next{0};
  auto worker = [&]() {
    detail::Workspace<D> ws(cm.pairs, cm.d);
    auto st = detail::make_state<D>(cm.pairs, cm.d);
    std::vector<double> vals(series_len);
    std::vector<Complex> comps(comp_len);
    for (;;) {
      const int b = next.fetch_add(1);
      if (b >= nblocks) break;
      BlockAccum& a = acc[b];
      a.sum.assign(series_len, 0.0);
      a.sumsq.assign(series_len, 0.0);
      a.env_min.assign(series_len, std::numeric_limits<double>::infinity());
      a.env_max.assign(series_len, -std::numeric_limits<double>::infinity());
      a.comp_sum.assign(comp_len, Complex(0.0, 0.0));
      const int i0 = b * kBlock;
      const int i1 = std::min(spec.N, i0 + kBlock);
      for (int i = i0; i < i1; ++i) {
        try {
          detail::load_state(h0, st);
          int counts = 0;
          if (spec.detection == Detection::homodyne) {
            HomodyneSink<D> sink;
            static_cast<Capture<D>&>(sink) = {spec.stride, steps, n_obs, t_out, &obs,
                                              vals.data(), comp_len ? comps.data() : nullptr, 0};
            detail::run_homodyne_impl(cm, pt, t_final, dt, spec.base_seed + i, nullptr, false, st,
                                      ws, sink);
          } else {
            PhotocountSink<D> sink;
            static_cast<Capture<D>&>(sink) = {spec.stride, steps, n_obs, t_out, &obs,
                                              vals.data(), comp_len ? comps.data() : nullptr, 0};
            detail::run_photocount_impl(cm, pt, t_final, dt, spec.base_seed + i, nullptr, 1e-12,
                                        st, ws, sink);
            counts = sink.n_cum;
          }
          for (double v : vals)
            if (!std::isfinite(v)) throw std::runtime_error("non-finite conditional expectation");
          for (std::size_t j = 0; j < series_len; ++j) {
            a.sum[j] += vals[j];
            a.sumsq[j] += vals[j] * vals[j];
            a.env_min[j] = std::min(a.env_min[j], vals[j]);
            a.env_max[j] = std::max(a.env_max[j], vals[j]);
          }
          for (std::size_t j = 0; j < comp_len; ++j) a.comp_sum[j] += comps[j];
          a.counts_sum += counts;
          ++a.successes;
          for (int o = 0; o < n_obs; ++o) {
            double mx = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < t_out; ++j) mx = std::max(mx, vals[o * t_out + j]);
            per_traj_max[static_cast<std::size_t>(o) * spec.N + i] = mx;
          }
        } catch (const std::exception& e) {
          a.failed.push_back(i);
          if (a.first_error.empty()) a.first_error = e.what();
        }
      }
    }
  };

  const int nthreads = std::min(resolve_threads(spec.threads), nblocks);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Deterministic merge in block order.
  std::vector<double> sum(series_len, 0.0), sumsq(series_len, 0.0);
  std::vector<double> env_min(series_len, std::numeric_limits<double>::infinity());
  std::vector<double> env_max(series_len, -std::numeric_limits<double>::infinity());
  std::vector<Complex> comp_sum(comp_len, Complex(0.0, 0.0));
  double counts_sum = 0.0;
  int successes = 0, failures = 0;
  std::string first_error;
  for (const BlockAccum& a : acc) {
    for (std::size_t j = 0; j < series_len; ++j) {
      sum[j] += a.sum[j];
      sumsq[j] += a.sumsq[j];
      env_min[j] = std::min(env_min[j], a.env_min[j]);
      env_max[j] = std::max(env_max[j], a.env_max[j]);
    }
    for (std::size_t j = 0; j < comp_len; ++j) comp_sum[j] += a.comp_sum[j];
    counts_sum += a.counts_sum;
    successes += a.successes;
    failures += static_cast<int>(a.failed.size());
    if (first_error.empty()) first_error = a.first_error;
  }
  if (successes == 0) throw std::runtime_error("all trajectories failed: " + first_error);
  if (failures > 0.01 * spec.N) {
    std::ostringstream os;
    os << failures << " of " << spec.N << " trajectories failed (first: " << first_error << ")";
    throw std::runtime_error(os.str());
  }

  EnsembleSummary s;
  s.requested_N = spec.N;
  s.failures = failures;
  s.times.push_back(0.0);
  for (int k = 0; k < steps; ++k)
    if ((k + 1) % spec.stride == 0 || k + 1 == steps) s.times.push_back((k + 1) * dt);
  for (const auto& o : spec.observables) s.labels.push_back(o.label);

  const double n = static_cast<double>(successes);
  s.mean.assign(n_obs, std::vector<double>(t_out, 0.0));
  s.stderr_.assign(n_obs, std::vector<double>(t_out, 0.0));
  s.env_min.assign(n_obs, std::vector<double>(t_out, 0.0));
  s.env_max.assign(n_obs, std::vector<double>(t_out, 0.0));
  for (int o = 0; o < n_obs; ++o) {
    for (int j = 0; j < t_out; ++j) {
      const std::size_t idx = static_cast<std::size_t>(o) * t_out + j;
      const double m = sum[idx] / n;
      s.mean[o][j] = m;
      if (successes > 1) {
        const double var = std::max(0.0, (sumsq[idx] - sum[idx] * sum[idx] / n) / (n - 1.0));
        s.stderr_[o][j] = std::sqrt(var / n);
      }
      s.env_min[o][j] = env_min[idx];
      s.env_max[o][j] = env_max[idx];
    }
  }

  const MasterSeries ms = integrate_master(model, pulses, t_final, dt, spec.stride);
  if (ms.times.size() != s.times.size())
    throw std::logic_error("ensemble and master time grids disagree");
  s.master.assign(n_obs, {});
  s.sup_norm_obs.assign(n_obs, 0.0);
  for (int o = 0; o < n_obs; ++o) {
    s.master[o] = ms.top_series(spec.observables[o].X);
    double sup = 0.0;
    for (int j = 0; j < t_out; ++j) sup = std::max(sup, std::abs(s.mean[o][j] - s.master[o][j]));
    s.sup_norm_obs[o] = sup;
  }

  if (spec.track_components) {
    double sup = 0.0;
    const Complex* src = comp_sum.data();
    for (int j = 0; j < t_out; ++j) {
      const DensityHierarchy& h = ms.snapshots[j];
      for (int p = 0; p < cm.pairs; ++p)
        for (int c = 0; c < cm.d; ++c)
          for (int r = 0; r < cm.d; ++r) sup = std::max(sup, std::abs(*src++ / n - h.comp(p)(r, c)));
    }
    s.sup_norm_components = sup;
  }

  s.per_traj_max.assign(n_obs, std::vector<double>(spec.N, 0.0));
  for (int o = 0; o < n_obs; ++o)
    for (int i = 0; i < spec.N; ++i)
      s.per_traj_max[o][i] = per_traj_max[static_cast<std::size_t>(o) * spec.N + i];
  s.mean_total_counts = counts_sum / n;
  s.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return s;
}

}  // namespace

EnsembleSummary run_ensemble(const EnsembleSpec& spec, const SystemModel& model,
                             const PulseSet& pulses, double t_final, double dt) {
  validate_spec(spec, model.dim());
  const int steps = checked_steps(t_final, dt, pulses);
  return detail::dispatch_dim(model.dim(), [&](auto dim_tag) {
    constexpr int D = decltype(dim_tag)::value;
    return run_impl<D>(spec, model, pulses, t_final, dt, steps);
  });
}

ConvergenceReport convergence_report(const EnsembleSpec& spec, const std::vector<int>& Ns,
                                     const SystemModel& model, const PulseSet& pulses,
                                     double t_final, double dt) {
  for (std::size_t i = 0; i + 1 < Ns.size(); ++i)
    if (!(Ns[i] < Ns[i + 1])) throw std::invalid_argument("Ns must be strictly ascending");
  ConvergenceReport rep;
  for (int N : Ns) {
    EnsembleSpec s = spec;
    s.N = N;
    const EnsembleSummary summary = run_ensemble(s, model, pulses, t_final, dt);
    double sup = 0.0;
    for (double v : summary.sup_norm_obs) sup = std::max(sup, v);
    rep.rows.push_back({N, sup});
  }
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    const double expected =
        std::sqrt(static_cast<double>(rep.rows[i].N) / static_cast<double>(rep.rows[i + 1].N));
    const double e1 = rep.rows[i].sup_norm, e2 = rep.rows[i + 1].sup_norm;
    bool ok = true;
    if (e1 > 0.0 && e2 > 0.0) {
      const double ratio = e2 / e1;
      ok = ratio >= 0.5 * expected && ratio <= 2.0 * expected;
    }
    rep.ratio_ok.push_back(ok);
  }
  return rep;
}

}  // namespace pf
