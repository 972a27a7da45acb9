#include "photonfilter/homodyne.hpp"

#include <cmath>
#include <stdexcept>

#include "engine_impl.hpp"

namespace pf {

namespace {

constexpr double kImWarnThreshold = 1e-8;

int checked_steps(double t_final, double dt) {
  if (t_final <= 0.0 || dt <= 0.0) throw std::invalid_argument("need t_final > 0 and dt > 0");
  const double ratio = t_final / dt;
  const long long steps = std::llround(ratio);
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio)
    throw std::invalid_argument("dt must divide t_final");
  return static_cast<int>(steps);
}

template <int D>
struct RecordSink {
  TrajectoryRecord* rec;
  std::vector<detail::Mat<D>> obs;

  void start(const std::vector<detail::Mat<D>>& st) {
    rec->times.push_back(0.0);
    push_observables(st);
  }
  void step(int, double t, double dY, double, double im, const std::vector<detail::Mat<D>>& st) {
    rec->times.push_back(t);
    rec->dY.push_back(dY);
    if (std::abs(im) > kImWarnThreshold) ++rec->im_warnings;
    push_observables(st);
  }
  void push_observables(const std::vector<detail::Mat<D>>& st) {
    for (std::size_t i = 0; i < obs.size(); ++i)
      rec->conditional[i].push_back(detail::re_expect(st[0], obs[i]));
    rec->trace_drift.push_back(std::abs(st[0].trace() - Complex(1.0, 0.0)));
  }
};

TrajectoryRecord run(const HierarchyEngine& eng, double t_final, double dt, std::uint64_t seed,
                     const double* replay, const std::vector<Observable>& observables,
                     bool renormalize) {
  const int steps = checked_steps(t_final, dt);
  TrajectoryRecord rec;
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

    RecordSink<D> sink{&rec, {}};
    for (const auto& o : observables) sink.obs.push_back(detail::Mat<D>(o.X));
    detail::run_homodyne_impl(cm, pt, t_final, dt, seed, replay, renormalize, st, ws, sink);
    return 0;
  });
  return rec;
}

}  // namespace

HomodyneStepInfo homodyne_step(const HierarchyEngine& eng, DensityHierarchy& h, double t,
                               double dt, double dY, bool renormalize) {
  constexpr int D = Eigen::Dynamic;
  const detail::Core<D> cm(eng);
  detail::Workspace<D> ws(cm.pairs, cm.d);
  auto st = detail::make_state<D>(cm.pairs, cm.d);
  detail::load_state(h, st);
  Complex xs[32];
  eng.pulse_values(t, xs);
  const auto [m, im] = detail::eval_drift_sbar(cm, xs, st, ws.drift, ws.gain, ws);
  const double dWbar = dY - m * dt;
  for (int p = 0; p < cm.pairs; ++p) st[p] += dt * ws.drift[p] + dWbar * (ws.gain[p] - m * st[p]);
  if (renormalize) {
    const double tr = st[0].trace().real();
    if (!(tr > 0.0)) detail::throw_numerical("top trace not positive at renormalization", t);
    for (int p = 0; p < cm.pairs; ++p) st[p] /= tr;
  }
  if (!is_finite(st[0])) detail::throw_numerical("homodyne filter produced a non-finite state", t);
  detail::store_state(st, h);
  return {m, im};
}

TrajectoryRecord simulate_homodyne(const HierarchyEngine& eng, double t_final, double dt,
                                   std::uint64_t seed, const std::vector<Observable>& observables,
                                   bool renormalize) {
  return run(eng, t_final, dt, seed, nullptr, observables, renormalize);
}

TrajectoryRecord replay_homodyne(const HierarchyEngine& eng, double t_final, double dt,
                                 const std::vector<double>& dY,
                                 const std::vector<Observable>& observables, bool renormalize) {
  const int steps = checked_steps(t_final, dt);
  if (static_cast<int>(dY.size()) != steps) {
    std::ostringstream os;
    os << "replay record has " << dY.size() << " increments but the run needs " << steps;
    throw std::invalid_argument(os.str());
  }
  return run(eng, t_final, dt, 0, dY.data(), observables, renormalize);
}

}  // namespace pf
