#include "photonfilter/master.hpp"

#include <cmath>
#include <stdexcept>

#include "engine_impl.hpp"

namespace pf {

namespace {

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

}  // namespace

std::vector<double> MasterSeries::top_series(const Matrix& X) const {
  std::vector<double> out;
  out.reserve(snapshots.size());
  for (const auto& h : snapshots) out.push_back(expectation_top(h, X).real());
  return out;
}

MasterSeries integrate_master(const SystemModel& model, const PulseSet& pulses, double t_final,
                              double dt, int stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  const int steps = checked_steps(t_final, dt, pulses);
  const HierarchyEngine eng(model, pulses);

  return detail::dispatch_dim(model.dim(), [&](auto dim_tag) {
    constexpr int D = decltype(dim_tag)::value;
    const detail::Core<D> cm(eng);
    const detail::PulseTable pt = detail::build_pulse_table(pulses, steps, dt, 2);
    detail::Workspace<D> ws(cm.pairs, cm.d);
    auto st = detail::make_state<D>(cm.pairs, cm.d);

    DensityHierarchy h = eng.init();
    detail::load_state(h, st);

    MasterSeries series;
    auto snapshot = [&](double t) {
      detail::store_state(st, h);
      if (!is_finite(h.comp(0))) detail::throw_numerical("master integration diverged", t);
      series.times.push_back(t);
      series.snapshots.push_back(h);
    };
    snapshot(0.0);
    for (int k = 0; k < steps; ++k) {
      detail::rk4_step(cm, pt, k, dt, st, ws);
      if ((k + 1) % stride == 0 || k + 1 == steps) snapshot((k + 1) * dt);
    }
    return series;
  });
}

}  // namespace pf
