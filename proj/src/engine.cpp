#include "photonfilter/engine.hpp"

#include <stdexcept>

#include "photonfilter/superop.hpp"

namespace pf {

HierarchyEngine::HierarchyEngine(const SystemModel& model, const PulseSet& pulses)
    : model_(model), pulses_(pulses), table_(pulses), subsets_(enumerate_subsets(pulses.n())) {
  const int n = pulses.n();
  const int m = 1 << n;
  rank_of_bits_.assign(m, 0);
  for (int i = 0; i < m; ++i) rank_of_bits_[subsets_[i].bits] = i;

  DensityHierarchy shape(n, model.dim());
  topo_.resize(shape.pair_count());
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      PairTopology& tp = topo_[shape.pair_index(a, b)];
      tp.rank_l = a;
      tp.rank_r = b;
      tp.l_bits = subsets_[a].bits;
      tp.r_bits = subsets_[b].bits;
      const std::uint32_t l = tp.l_bits, r = tp.r_bits;
      auto pair_of = [&](std::uint32_t lb, std::uint32_t rb, bool& adj) {
        const int ra = rank_of_bits_[lb], rb2 = rank_of_bits_[rb];
        adj = ra > rb2;
        return adj ? shape.pair_index(rb2, ra) : shape.pair_index(ra, rb2);
      };
      for (int mu = 1; mu <= n; ++mu) {
        if (r >> (mu - 1) & 1u) continue;
        bool adj;
        const int src = pair_of(l, r | (1u << (mu - 1)), adj);
        tp.t10.push_back({src, table_.step_ratio(r, mu), mu - 1, adj});
      }
      for (int nu = 1; nu <= n; ++nu) {
        if (l >> (nu - 1) & 1u) continue;
        bool adj;
        const int src = pair_of(l | (1u << (nu - 1)), r, adj);
        tp.t01.push_back({src, table_.step_ratio(l, nu), nu - 1, adj});
      }
      for (int nu = 1; nu <= n; ++nu) {
        if (l >> (nu - 1) & 1u) continue;
        for (int mu = 1; mu <= n; ++mu) {
          if (r >> (mu - 1) & 1u) continue;
          bool adj;
          const int src = pair_of(l | (1u << (nu - 1)), r | (1u << (mu - 1)), adj);
          tp.t11.push_back(
              {src, table_.step_ratio(l, nu) * table_.step_ratio(r, mu), nu - 1, mu - 1, adj});
        }
      }
    }
  }
}

void HierarchyEngine::pulse_values(double t, Complex* xs) const {
  for (int i = 0; i < pulses_.n(); ++i) xs[i] = pulses_.value(i, t);
}

DensityHierarchy HierarchyEngine::init() const { return init_hierarchy(model_, pulses_); }

void HierarchyEngine::master_rhs(const DensityHierarchy& h, double t, DensityHierarchy& out) const {
  const int d = dim();
  Complex xs[32];
  pulse_values(t, xs);
  Matrix sum(d, d);
  for (int p = 0; p < pair_count(); ++p) {
    const PairTopology& tp = topo_[p];
    const Matrix& rho = h.comp(p);
    Matrix& dst = out.comp(p);
    dst = apply_schrodinger_superop(Jk::jk00, model_, rho);
    if (!tp.t10.empty()) {
      sum.setZero();
      for (const Coupling& c : tp.t10) {
        const Complex w = c.w * std::conj(xs[c.xi]);
        if (c.adj) sum.noalias() += w * h.comp(c.src).adjoint();
        else sum.noalias() += w * h.comp(c.src);
      }
      dst += apply_schrodinger_superop(Jk::jk10, model_, sum);
    }
    if (!tp.t01.empty()) {
      sum.setZero();
      for (const Coupling& c : tp.t01) {
        const Complex w = c.w * xs[c.xi];
        if (c.adj) sum.noalias() += w * h.comp(c.src).adjoint();
        else sum.noalias() += w * h.comp(c.src);
      }
      dst += apply_schrodinger_superop(Jk::jk01, model_, sum);
    }
    if (!tp.t11.empty() && !model_.s_is_identity) {
      sum.setZero();
      for (const Coupling2& c : tp.t11) {
        const Complex w = c.w * xs[c.xi_nu] * std::conj(xs[c.xi_mu]);
        if (c.adj) sum.noalias() += w * h.comp(c.src).adjoint();
        else sum.noalias() += w * h.comp(c.src);
      }
      dst += apply_schrodinger_superop(Jk::jk11, model_, sum);
    }
  }
}

DensityHierarchy HierarchyEngine::master_rhs(const DensityHierarchy& h, double t) const {
  DensityHierarchy out(h.n(), h.dim());
  master_rhs(h, t, out);
  return out;
}

void HierarchyEngine::coupling_sums(const DensityHierarchy& h, const SubsetIndex& l,
                                    const SubsetIndex& r, double t, Matrix& sum10, Matrix& sum01,
                                    Matrix& sum11) const {
  const int d = dim();
  sum10 = Matrix::Zero(d, d);
  sum01 = Matrix::Zero(d, d);
  sum11 = Matrix::Zero(d, d);
  const int rank_l = rank_of_bits_[l.bits];
  const int rank_r = rank_of_bits_[r.bits];
  for (const auto& [mu, c] : annihilation_coefficients(pulses_, table_, r, t))
    sum10 += std::conj(c) * h.fetch(rank_l, rank_of_bits_[r.bits | (1u << (mu - 1))]);
  for (const auto& [nu, c] : annihilation_coefficients(pulses_, table_, l, t))
    sum01 += c * h.fetch(rank_of_bits_[l.bits | (1u << (nu - 1))], rank_r);
  for (const auto& [nu, cn] : annihilation_coefficients(pulses_, table_, l, t))
    for (const auto& [mu, cm] : annihilation_coefficients(pulses_, table_, r, t))
      sum11 += cn * std::conj(cm) *
               h.fetch(rank_of_bits_[l.bits | (1u << (nu - 1))],
                       rank_of_bits_[r.bits | (1u << (mu - 1))]);
}

Matrix HierarchyEngine::sbar(const DensityHierarchy& h, const SubsetIndex& l, const SubsetIndex& r,
                             double t) const {
  Matrix sum10, sum01, sum11;
  coupling_sums(h, l, r, t, sum10, sum01, sum11);
  const Matrix rho = h.fetch(rank_of_bits_[l.bits], rank_of_bits_[r.bits]);
  return model_.L * rho + rho * model_.Ld + sum10 * model_.Sd + model_.S * sum01;
}

Matrix HierarchyEngine::delta_dual(const DensityHierarchy& h, const SubsetIndex& l,
                                   const SubsetIndex& r, double t) const {
  Matrix sum10, sum01, sum11;
  coupling_sums(h, l, r, t, sum10, sum01, sum11);
  const Matrix rho = h.fetch(rank_of_bits_[l.bits], rank_of_bits_[r.bits]);
  return model_.L * rho * model_.Ld + model_.L * sum10 * model_.Sd + model_.S * sum01 * model_.Ld +
         model_.S * sum11 * model_.Sd;
}

}  // namespace pf
