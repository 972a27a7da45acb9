#include "photonfilter/fock.hpp"

#include <cmath>
#include <stdexcept>

#include "photonfilter/rng.hpp"
#include "photonfilter/superop.hpp"

namespace pf {

FockLadder::FockLadder(const SystemModel& model, const PulseSet& pulses, int n_photons)
    : model_(model), pulses_(pulses), n_(n_photons) {
  if (n_ < 0) throw std::invalid_argument("photon number must be >= 0");
  if (n_ > 0 && pulses.n() < 1)
    throw std::invalid_argument("Fock ladder needs one pulse profile");
  const Matrix rho0 = model.initial_state * model.initial_state.adjoint();
  comps_.assign((n_ + 1) * (n_ + 1), Matrix::Zero(model.dim(), model.dim()));
  for (int p = 0; p <= n_; ++p) comp(p, p) = rho0;  // <F^q|F^p> = delta_pq
}

void FockLadder::master_rhs(const std::vector<Matrix>& comps, double t,
                            std::vector<Matrix>& out) const {
  const Complex x = xi(t);
  auto at = [&](int p, int q) -> const Matrix& { return comps[p * (n_ + 1) + q]; };
  for (int p = 0; p <= n_; ++p) {
    for (int q = 0; q <= n_; ++q) {
      Matrix d = apply_schrodinger_superop(Jk::jk00, model_, at(p, q));
      if (q >= 1)
        d += std::sqrt(double(q)) * std::conj(x) *
             apply_schrodinger_superop(Jk::jk10, model_, at(p, q - 1));
      if (p >= 1)
        d += std::sqrt(double(p)) * x * apply_schrodinger_superop(Jk::jk01, model_, at(p - 1, q));
      if (p >= 1 && q >= 1)
        d += std::sqrt(double(p * q)) * std::norm(x) *
             apply_schrodinger_superop(Jk::jk11, model_, at(p - 1, q - 1));
      out[p * (n_ + 1) + q] = d;
    }
  }
}

void FockLadder::rk4_step(double t, double dt) {
  const std::size_t count = comps_.size();
  std::vector<Matrix> k1(count), k2(count), k3(count), k4(count), stage(count);
  master_rhs(comps_, t, k1);
  for (std::size_t i = 0; i < count; ++i) stage[i] = comps_[i] + 0.5 * dt * k1[i];
  master_rhs(stage, t + 0.5 * dt, k2);
  for (std::size_t i = 0; i < count; ++i) stage[i] = comps_[i] + 0.5 * dt * k2[i];
  master_rhs(stage, t + 0.5 * dt, k3);
  for (std::size_t i = 0; i < count; ++i) stage[i] = comps_[i] + dt * k3[i];
  master_rhs(stage, t + dt, k4);
  for (std::size_t i = 0; i < count; ++i)
    comps_[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

Matrix FockLadder::sbar(int p, int q, double t) const {
  const Complex x = xi(t);
  Matrix sb = model_.L * comp(p, q) + comp(p, q) * model_.Ld;
  if (q >= 1) sb += std::sqrt(double(q)) * std::conj(x) * (comp(p, q - 1) * model_.Sd);
  if (p >= 1) sb += std::sqrt(double(p)) * x * (model_.S * comp(p - 1, q));
  return sb;
}

HomodyneStepInfo FockLadder::filter_step(double t, double dt, double dY) {
  const std::size_t count = comps_.size();
  std::vector<Matrix> drift(count), gain(count);
  master_rhs(comps_, t, drift);
  for (int p = 0; p <= n_; ++p)
    for (int q = 0; q <= n_; ++q) gain[p * (n_ + 1) + q] = sbar(p, q, t);
  const Complex tr = gain[n_ * (n_ + 1) + n_].trace();
  const double m = tr.real();
  const double dWbar = dY - m * dt;
  for (std::size_t i = 0; i < count; ++i)
    comps_[i] += dt * drift[i] + dWbar * (gain[i] - m * comps_[i]);
  if (!is_finite(top()))
    throw std::runtime_error("Fock filter produced a non-finite state");
  return {m, tr.imag()};
}

namespace {

TrajectoryRecord run_fock(const SystemModel& model, const PulseSet& pulses, int n_photons,
                          double t_final, double dt, std::uint64_t seed, const double* replay,
                          const std::vector<Observable>& observables) {
  const double ratio = t_final / dt;
  const long long steps = std::llround(ratio);
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio)
    throw std::invalid_argument("dt must divide t_final");

  FockLadder ladder(model, pulses, n_photons);
  TrajectoryRecord rec;
  rec.seed = seed;
  rec.conditional.resize(observables.size());
  for (const auto& o : observables) rec.labels.push_back(o.label);
  const CounterRng rng(seed);
  const double sqdt = std::sqrt(dt);

  auto push = [&](double t) {
    rec.times.push_back(t);
    for (std::size_t i = 0; i < observables.size(); ++i)
      rec.conditional[i].push_back((ladder.top().adjoint() * observables[i].X).trace().real());
    rec.trace_drift.push_back(std::abs(ladder.top().trace() - Complex(1.0, 0.0)));
  };
  push(0.0);
  for (long long k = 0; k < steps; ++k) {
    const double t = k * dt;
    double dY;
    if (replay) {
      dY = replay[k];
    } else {
      // Peek m_t to synthesize dY = m dt + dW; filter_step recomputes it.
      const double m = ladder.sbar(n_photons, n_photons, t).trace().real();
      dY = m * dt + sqdt * rng.normal(static_cast<std::uint64_t>(k));
    }
    const HomodyneStepInfo info = ladder.filter_step(t, dt, dY);
    if (std::abs(info.im_residue) > 1e-8) ++rec.im_warnings;
    rec.dY.push_back(dY);
    push(t + dt);
  }
  return rec;
}

}  // namespace

TrajectoryRecord simulate_fock_homodyne(const SystemModel& model, const PulseSet& pulses,
                                        int n_photons, double t_final, double dt,
                                        std::uint64_t seed,
                                        const std::vector<Observable>& observables) {
  return run_fock(model, pulses, n_photons, t_final, dt, seed, nullptr, observables);
}

TrajectoryRecord replay_fock_homodyne(const SystemModel& model, const PulseSet& pulses,
                                      int n_photons, double t_final, double dt,
                                      const std::vector<double>& dY,
                                      const std::vector<Observable>& observables) {
  const long long steps = std::llround(t_final / dt);
  if (static_cast<long long>(dY.size()) != steps)
    throw std::invalid_argument("replay record length does not match the step count");
  return run_fock(model, pulses, n_photons, t_final, dt, 0, dY.data(), observables);
}

}  // namespace pf
