#include "photonfilter/photocount.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "engine_impl.hpp"

namespace pf {

namespace {

constexpr double kRateWarnThreshold = 0.1;  // lambda dt above this flags the step

int checked_steps(double t_final, double dt) {
  if (t_final <= 0.0 || dt <= 0.0) throw std::invalid_argument("need t_final > 0 and dt > 0");
  const double ratio = t_final / dt;
  const long long steps = std::llround(ratio);
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio)
    throw std::invalid_argument("dt must divide t_final");
  return static_cast<int>(steps);
}

template <int D>
struct JumpSink {
  JumpRecord* rec;
  double dt = 0.0;
  std::vector<detail::Mat<D>> obs;
  int n_cum = 0;

  void start(const std::vector<detail::Mat<D>>& st) {
    rec->times.push_back(0.0);
    rec->counts.push_back(0);
    push_observables(st);
  }
  void step(int k, double t, bool jumped, double lambda, const std::vector<detail::Mat<D>>& st) {
    if (jumped) {
      ++n_cum;
      rec->jump_times.push_back(k * dt);
    }
    if (lambda * dt > kRateWarnThreshold) ++rec->rate_warnings;
    rec->times.push_back(t);
    rec->counts.push_back(n_cum);
    push_observables(st);
  }
  void push_observables(const std::vector<detail::Mat<D>>& st) {
    for (std::size_t i = 0; i < obs.size(); ++i)
      rec->conditional[i].push_back(detail::re_expect(st[0], obs[i]));
    rec->trace_drift.push_back(std::abs(st[0].trace() - Complex(1.0, 0.0)));
  }
};

JumpRecord run(const HierarchyEngine& eng, double t_final, double dt, std::uint64_t seed,
               const std::vector<double>* replay, const std::vector<Observable>& observables,
               double rate_floor) {
  const int steps = checked_steps(t_final, dt);
  JumpRecord rec;
  rec.seed = seed;
  rec.conditional.resize(observables.size());
  for (const auto& o : observables) rec.labels.push_back(o.label);

  detail::dispatch_dim(eng.dim(), [&](auto dim_tag) {
    constexpr int D = decltype(dim_tag)::value;
    const detail::Core<D> cm(eng);
    const detail::PulseTable pt = detail::build_pulse_table(eng.pulses(), steps, dt, 1);
    detail::Workspace<D> ws(cm.pairs, cm.d);
    auto st = detail::make_state<D>(cm.pairs, cm.d);
    DensityHierarchy h0 = eng.init();
    detail::load_state(h0, st);

    JumpSink<D> sink{&rec, dt, {}, 0};
    for (const auto& o : observables) sink.obs.push_back(detail::Mat<D>(o.X));
    detail::run_photocount_impl(cm, pt, t_final, dt, seed, replay, rate_floor, st, ws, sink);
    return 0;
  });
  return rec;
}

}  // namespace

PhotocountStepInfo photocount_step(const HierarchyEngine& eng, DensityHierarchy& h, double t,
                                   double dt, bool jumped, double rate_floor) {
  constexpr int D = Eigen::Dynamic;
  const detail::Core<D> cm(eng);
  detail::Workspace<D> ws(cm.pairs, cm.d);
  auto st = detail::make_state<D>(cm.pairs, cm.d);
  detail::load_state(h, st);
  Complex xs[32];
  eng.pulse_values(t, xs);
  const double lambda = detail::eval_drift_jump(cm, xs, st, ws.drift, ws.gain, ws);
  if (!std::isfinite(lambda)) detail::throw_numerical("photocount rate is non-finite", t);
  if (jumped) {
    if (lambda < rate_floor) detail::throw_numerical("jump at vanishing rate", t);
    for (int p = 0; p < cm.pairs; ++p) st[p] = ws.gain[p] / lambda;
  } else {
    for (int p = 0; p < cm.pairs; ++p)
      st[p] += dt * (ws.drift[p] - ws.gain[p] + lambda * st[p]);
  }
  if (!is_finite(st[0]))
    detail::throw_numerical("photocount filter produced a non-finite state", t);
  detail::store_state(st, h);
  return {lambda, jumped};
}

JumpRecord simulate_photocount(const HierarchyEngine& eng, double t_final, double dt,
                               std::uint64_t seed, const std::vector<Observable>& observables,
                               double rate_floor) {
  return run(eng, t_final, dt, seed, nullptr, observables, rate_floor);
}

JumpRecord replay_photocount(const HierarchyEngine& eng, double t_final, double dt,
                             const std::vector<double>& jump_times,
                             const std::vector<Observable>& observables, double rate_floor) {
  for (std::size_t i = 0; i + 1 < jump_times.size(); ++i)
    if (!(jump_times[i] < jump_times[i + 1]))
      throw std::invalid_argument("replayed jump times must be strictly increasing");
  if (!jump_times.empty() && (jump_times.front() < 0.0 || jump_times.back() >= t_final))
    throw std::invalid_argument("replayed jump times must lie in [0, t_final)");
  return run(eng, t_final, dt, 0, &jump_times, observables, rate_floor);
}

}  // namespace pf
