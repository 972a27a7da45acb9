#pragma once

// Dimension-specialized evaluation cores for the integrators. The public
// HierarchyEngine API works on dynamic matrices; these templates run the same
// coupling topology on fixed-size matrices (d = 2,3,4) so the per-step cost is
// a handful of unrolled small-matrix products. Selected via dispatch_dim.

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "photonfilter/engine.hpp"
#include "photonfilter/rng.hpp"

namespace pf::detail {

template <int D>
using Mat = Eigen::Matrix<Complex, D, D>;

template <class Fn>
decltype(auto) dispatch_dim(int d, Fn&& fn) {
  switch (d) {
    case 2:
      return fn(std::integral_constant<int, 2>{});
    case 3:
      return fn(std::integral_constant<int, 3>{});
    case 4:
      return fn(std::integral_constant<int, 4>{});
    default:
      return fn(std::integral_constant<int, Eigen::Dynamic>{});
  }
}

template <int D>
struct Core {
  Mat<D> S, L, H, Sd, Ld, LdL;
  bool s_id = false, h_zero = false;
  int d = 0, n = 0, pairs = 0;
  const std::vector<PairTopology>* topo = nullptr;

  explicit Core(const HierarchyEngine& eng) {
    const SystemModel& m = eng.model();
    d = m.dim();
    S = m.S;
    L = m.L;
    H = m.H;
    Sd = m.Sd;
    Ld = m.Ld;
    LdL = m.LdL;
    s_id = m.s_is_identity;
    h_zero = m.h_is_zero;
    n = eng.n();
    pairs = eng.pair_count();
    topo = &eng.topo();
  }

  // out = L rho L^* - 1/2 {L^*L, rho} - i[H, rho]
  void d00(const Mat<D>& rho, Mat<D>& out, Mat<D>& t) const {
    t.noalias() = L * rho;
    out.noalias() = t * Ld;
    out.noalias() -= 0.5 * (LdL * rho);
    out.noalias() -= 0.5 * (rho * LdL);
    if (!h_zero) {
      constexpr Complex i(0.0, 1.0);
      out.noalias() -= i * (H * rho);
      out.noalias() += i * (rho * H);
    }
  }

  // out += [L, a S^*]
  void add_d10(const Mat<D>& a, Mat<D>& out, Mat<D>& t) const {
    if (s_id) {
      out.noalias() += L * a;
      out.noalias() -= a * L;
    } else {
      t.noalias() = a * Sd;
      out.noalias() += L * t;
      out.noalias() -= t * L;
    }
  }

  // out += [S a, L^*]
  void add_d01(const Mat<D>& a, Mat<D>& out, Mat<D>& t) const {
    if (s_id) {
      out.noalias() += a * Ld;
      out.noalias() -= Ld * a;
    } else {
      t.noalias() = S * a;
      out.noalias() += t * Ld;
      out.noalias() -= Ld * t;
    }
  }

  // out += S a S^* - a   (identically zero when S = I; callers skip that case)
  void add_d11(const Mat<D>& a, Mat<D>& out, Mat<D>& t) const {
    t.noalias() = S * a;
    out.noalias() += t * Sd;
    out -= a;
  }
};

template <int D>
std::vector<Mat<D>> make_state(int pairs, int d) {
  std::vector<Mat<D>> st(pairs);
  for (auto& m : st) m = Mat<D>::Zero(d, d);
  return st;
}

template <int D>
void load_state(const DensityHierarchy& h, std::vector<Mat<D>>& st) {
  for (int p = 0; p < static_cast<int>(st.size()); ++p) st[p] = h.comp(p);
}

template <int D>
void store_state(const std::vector<Mat<D>>& st, DensityHierarchy& h) {
  for (int p = 0; p < static_cast<int>(st.size()); ++p) h.comp(p) = st[p];
}

// Pulse samples prefetched for the whole run: row j holds the n values at
// t = j * dt / substeps (substeps = 2 for RK4 half-steps, 1 for the filters).
struct PulseTable {
  int n = 0;
  int substeps = 1;
  std::vector<Complex> vals;
  const Complex* row(int j) const { return vals.data() + static_cast<std::size_t>(j) * n; }
};

inline PulseTable build_pulse_table(const PulseSet& pulses, int steps, double dt, int substeps) {
  PulseTable pt;
  pt.n = pulses.n();
  pt.substeps = substeps;
  const int rows = steps * substeps + 1;
  pt.vals.resize(static_cast<std::size_t>(rows) * pt.n);
  for (int j = 0; j < rows; ++j)
    for (int i = 0; i < pt.n; ++i)
      pt.vals[static_cast<std::size_t>(j) * pt.n + i] = pulses.value(i, j * dt / substeps);
  return pt;
}

template <int D>
void accumulate10(const std::vector<Coupling>& list, const Complex* xs,
                  const std::vector<Mat<D>>& st, Mat<D>& acc) {
  acc.setZero();
  for (const Coupling& c : list) {
    const Complex w = c.w * std::conj(xs[c.xi]);
    if (c.adj)
      acc.noalias() += w * st[c.src].adjoint();
    else
      acc.noalias() += w * st[c.src];
  }
}

template <int D>
void accumulate01(const std::vector<Coupling>& list, const Complex* xs,
                  const std::vector<Mat<D>>& st, Mat<D>& acc) {
  acc.setZero();
  for (const Coupling& c : list) {
    const Complex w = c.w * xs[c.xi];
    if (c.adj)
      acc.noalias() += w * st[c.src].adjoint();
    else
      acc.noalias() += w * st[c.src];
  }
}

template <int D>
void accumulate11(const std::vector<Coupling2>& list, const Complex* xs,
                  const std::vector<Mat<D>>& st, Mat<D>& acc) {
  acc.setZero();
  for (const Coupling2& c : list) {
    const Complex w = c.w * xs[c.xi_nu] * std::conj(xs[c.xi_mu]);
    if (c.adj)
      acc.noalias() += w * st[c.src].adjoint();
    else
      acc.noalias() += w * st[c.src];
  }
}

template <int D>
struct Workspace {
  std::vector<Mat<D>> k1, k2, k3, k4, stage, drift, gain;
  Mat<D> acc, t1;

  Workspace(int pairs, int d)
      : k1(make_state<D>(pairs, d)),
        k2(make_state<D>(pairs, d)),
        k3(make_state<D>(pairs, d)),
        k4(make_state<D>(pairs, d)),
        stage(make_state<D>(pairs, d)),
        drift(make_state<D>(pairs, d)),
        gain(make_state<D>(pairs, d)),
        acc(Mat<D>::Zero(d, d)),
        t1(Mat<D>::Zero(d, d)) {}
};

// Master drift for every canonical pair.
template <int D>
void eval_rhs(const Core<D>& cm, const Complex* xs, const std::vector<Mat<D>>& st,
              std::vector<Mat<D>>& out, Workspace<D>& ws) {
  for (int p = 0; p < cm.pairs; ++p) {
    const PairTopology& tp = (*cm.topo)[p];
    cm.d00(st[p], out[p], ws.t1);
    if (!tp.t10.empty()) {
      accumulate10(tp.t10, xs, st, ws.acc);
      cm.add_d10(ws.acc, out[p], ws.t1);
    }
    if (!tp.t01.empty()) {
      accumulate01(tp.t01, xs, st, ws.acc);
      cm.add_d01(ws.acc, out[p], ws.t1);
    }
    if (!cm.s_id && !tp.t11.empty()) {
      accumulate11(tp.t11, xs, st, ws.acc);
      cm.add_d11(ws.acc, out[p], ws.t1);
    }
  }
}

// Master drift plus the homodyne gain family; returns Tr[S-bar^top] (re, im).
template <int D>
std::pair<double, double> eval_drift_sbar(const Core<D>& cm, const Complex* xs,
                                          const std::vector<Mat<D>>& st,
                                          std::vector<Mat<D>>& drift, std::vector<Mat<D>>& sb,
                                          Workspace<D>& ws) {
  for (int p = 0; p < cm.pairs; ++p) {
    const PairTopology& tp = (*cm.topo)[p];
    cm.d00(st[p], drift[p], ws.t1);
    sb[p].noalias() = cm.L * st[p];
    sb[p].noalias() += st[p] * cm.Ld;
    if (!tp.t10.empty()) {
      accumulate10(tp.t10, xs, st, ws.acc);
      cm.add_d10(ws.acc, drift[p], ws.t1);
      if (cm.s_id)
        sb[p] += ws.acc;
      else
        sb[p].noalias() += ws.acc * cm.Sd;
    }
    if (!tp.t01.empty()) {
      accumulate01(tp.t01, xs, st, ws.acc);
      cm.add_d01(ws.acc, drift[p], ws.t1);
      if (cm.s_id)
        sb[p] += ws.acc;
      else
        sb[p].noalias() += cm.S * ws.acc;
    }
    if (!cm.s_id && !tp.t11.empty()) {
      accumulate11(tp.t11, xs, st, ws.acc);
      cm.add_d11(ws.acc, drift[p], ws.t1);
    }
  }
  const Complex tr = sb[0].trace();
  return {tr.real(), tr.imag()};
}

// Master drift plus the jump family J; returns the counting rate Re Tr[J^top].
template <int D>
double eval_drift_jump(const Core<D>& cm, const Complex* xs, const std::vector<Mat<D>>& st,
                       std::vector<Mat<D>>& drift, std::vector<Mat<D>>& jj, Workspace<D>& ws) {
  for (int p = 0; p < cm.pairs; ++p) {
    const PairTopology& tp = (*cm.topo)[p];
    cm.d00(st[p], drift[p], ws.t1);
    ws.t1.noalias() = cm.L * st[p];
    jj[p].noalias() = ws.t1 * cm.Ld;
    if (!tp.t10.empty()) {
      accumulate10(tp.t10, xs, st, ws.acc);
      cm.add_d10(ws.acc, drift[p], ws.t1);
      if (cm.s_id) {
        jj[p].noalias() += cm.L * ws.acc;
      } else {
        ws.t1.noalias() = cm.L * ws.acc;
        jj[p].noalias() += ws.t1 * cm.Sd;
      }
    }
    if (!tp.t01.empty()) {
      accumulate01(tp.t01, xs, st, ws.acc);
      cm.add_d01(ws.acc, drift[p], ws.t1);
      if (cm.s_id) {
        jj[p].noalias() += ws.acc * cm.Ld;
      } else {
        ws.t1.noalias() = cm.S * ws.acc;
        jj[p].noalias() += ws.t1 * cm.Ld;
      }
    }
    if (!tp.t11.empty()) {
      accumulate11(tp.t11, xs, st, ws.acc);
      if (cm.s_id) {
        jj[p] += ws.acc;
      } else {
        cm.add_d11(ws.acc, drift[p], ws.t1);
        ws.t1.noalias() = cm.S * ws.acc;
        jj[p].noalias() += ws.t1 * cm.Sd;
      }
    }
  }
  return jj[0].trace().real();
}

template <int D>
void rk4_step(const Core<D>& cm, const PulseTable& pt, int k, double dt, std::vector<Mat<D>>& st,
              Workspace<D>& ws) {
  const int j = 2 * k;
  eval_rhs(cm, pt.row(j), st, ws.k1, ws);
  for (int p = 0; p < cm.pairs; ++p) ws.stage[p] = st[p] + (0.5 * dt) * ws.k1[p];
  eval_rhs(cm, pt.row(j + 1), ws.stage, ws.k2, ws);
  for (int p = 0; p < cm.pairs; ++p) ws.stage[p] = st[p] + (0.5 * dt) * ws.k2[p];
  eval_rhs(cm, pt.row(j + 1), ws.stage, ws.k3, ws);
  for (int p = 0; p < cm.pairs; ++p) ws.stage[p] = st[p] + dt * ws.k3[p];
  eval_rhs(cm, pt.row(j + 2), ws.stage, ws.k4, ws);
  const double w = dt / 6.0;
  for (int p = 0; p < cm.pairs; ++p)
    st[p] += w * (ws.k1[p] + 2.0 * ws.k2[p] + 2.0 * ws.k3[p] + ws.k4[p]);
}

inline void throw_numerical(const char* what, double t) {
  std::ostringstream os;
  os << what << " at t = " << t;
  throw std::runtime_error(os.str());
}

// Advances one homodyne trajectory. The sink sees the state after every step:
//   sink.start(st); sink.step(k, t_next, dY, m, im_residue, st)
// dY comes from the replay array when given, otherwise m dt + dW with
// dW ~ Normal(0, dt) drawn from the counter-based generator at counter k.
template <int D, class Sink>
void run_homodyne_impl(const Core<D>& cm, const PulseTable& pt, double t_final, double dt,
                       std::uint64_t seed, const double* replay_dY, bool renormalize,
                       std::vector<Mat<D>>& st, Workspace<D>& ws, Sink&& sink) {
  const int steps = static_cast<int>(std::llround(t_final / dt));
  const double sqdt = std::sqrt(dt);
  const CounterRng rng(seed);
  sink.start(st);
  for (int k = 0; k < steps; ++k) {
    const auto [m, im] = eval_drift_sbar(cm, pt.row(k), st, ws.drift, ws.gain, ws);
    const double dY = replay_dY ? replay_dY[k] : m * dt + sqdt * rng.normal(k);
    const double dWbar = dY - m * dt;
    for (int p = 0; p < cm.pairs; ++p)
      st[p] += dt * ws.drift[p] + dWbar * (ws.gain[p] - m * st[p]);
    if (renormalize) {
      const double tr = st[0].trace().real();
      if (!(tr > 0.0)) throw_numerical("top trace not positive at renormalization", (k + 1) * dt);
      const double inv = 1.0 / tr;
      for (int p = 0; p < cm.pairs; ++p) st[p] *= inv;
    }
    const Complex tr = st[0].trace();
    if (!std::isfinite(tr.real()) || !std::isfinite(tr.imag()) || !std::isfinite(m))
      throw_numerical("homodyne filter produced a non-finite state", (k + 1) * dt);
    sink.step(k, (k + 1) * dt, dY, m, im, st);
  }
}

// Advances one photocounting trajectory; Bernoulli thinning with probability
// lambda dt (or the replayed jump times). sink.step also reports jumps.
template <int D, class Sink>
void run_photocount_impl(const Core<D>& cm, const PulseTable& pt, double t_final, double dt,
                         std::uint64_t seed, const std::vector<double>* replay_jumps,
                         double rate_floor, std::vector<Mat<D>>& st, Workspace<D>& ws,
                         Sink&& sink) {
  const int steps = static_cast<int>(std::llround(t_final / dt));
  const CounterRng rng(seed);
  std::size_t cursor = 0;
  sink.start(st);
  for (int k = 0; k < steps; ++k) {
    const double t = k * dt;
    const double lambda = eval_drift_jump(cm, pt.row(k), st, ws.drift, ws.gain, ws);
    if (!std::isfinite(lambda)) throw_numerical("photocount rate is non-finite", t);
    bool jump = false;
    if (replay_jumps) {
      // Bin a jump time into step k iff it lies in [k dt, (k+1) dt). The bin
      // edges must be computed as multiples of dt -- the same expression the
      // recorder uses -- not accumulated as t + dt, which can round past the
      // next grid point and steal a jump from the following step.
      while (cursor < replay_jumps->size() && (*replay_jumps)[cursor] < t) ++cursor;
      jump = cursor < replay_jumps->size() && (*replay_jumps)[cursor] < (k + 1) * dt;
      if (jump) ++cursor;
    } else {
      jump = rng.uniform(k) < lambda * dt;
    }
    if (jump) {
      if (lambda < rate_floor) throw_numerical("jump at vanishing rate", t);
      const double inv = 1.0 / lambda;
      for (int p = 0; p < cm.pairs; ++p) st[p] = inv * ws.gain[p];
    } else {
      for (int p = 0; p < cm.pairs; ++p)
        st[p] += dt * (ws.drift[p] - ws.gain[p] + lambda * st[p]);
    }
    const Complex tr = st[0].trace();
    if (!std::isfinite(tr.real()) || !std::isfinite(tr.imag()))
      throw_numerical("photocount filter produced a non-finite state", (k + 1) * dt);
    sink.step(k, (k + 1) * dt, jump, lambda, st);
  }
}

template <int D>
double re_expect(const Mat<D>& rho, const Mat<D>& x) {
  return (rho.adjoint() * x).trace().real();
}

}  // namespace pf::detail
