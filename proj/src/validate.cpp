#include "photonfilter/validate.hpp"

#include <Eigen/QR>
#include <cmath>

#include "photonfilter/fock.hpp"
#include "photonfilter/master.hpp"
#include "photonfilter/permanent.hpp"
#include "photonfilter/rng.hpp"
#include "photonfilter/superop.hpp"

namespace pf {

Complex wick_pairing(const Matrix& gram, const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return Complex(0.0, 0.0);
  if (a.empty()) return Complex(1.0, 0.0);
  const std::vector<int> a_rest(a.begin() + 1, a.end());
  Complex out(0.0, 0.0);
  for (std::size_t j = 0; j < b.size(); ++j) {
    std::vector<int> b_rest;
    b_rest.reserve(b.size() - 1);
    for (std::size_t q = 0; q < b.size(); ++q)
      if (q != j) b_rest.push_back(b[q]);
    out += gram(a[0], b[j]) * wick_pairing(gram, a_rest, b_rest);
  }
  return out;
}

namespace {

std::vector<int> complement_members0(const SubsetIndex& r) {
  std::vector<int> out;
  for (int i = 0; i < r.n; ++i)
    if (!(r.bits >> i & 1u)) out.push_back(i);
  return out;
}

}  // namespace

double wick_normalization(const PulseSet& pulses, const SubsetIndex& r) {
  const Matrix G = gram_matrix(pulses);
  const std::vector<int> c = complement_members0(r);
  return wick_pairing(G, c, c).real();
}

Complex wick_overlap(const PulseSet& pulses, const SubsetIndex& l, const SubsetIndex& r) {
  if (l.k() != r.k()) return Complex(0.0, 0.0);
  const Matrix G = gram_matrix(pulses);
  const std::vector<int> cl = complement_members0(l);
  const std::vector<int> cr = complement_members0(r);
  const double nl = wick_pairing(G, cl, cl).real();
  const double nr = wick_pairing(G, cr, cr).real();
  return wick_pairing(G, cl, cr) / std::sqrt(nl * nr);
}

Complex heisenberg_delta_pairing(const HierarchyEngine& eng, const DensityHierarchy& h,
                                 const SubsetIndex& l, const SubsetIndex& r, const Matrix& X,
                                 double t) {
  const SystemModel& m = eng.model();
  const Matrix LXL = m.Ld * X * m.L;
  const Matrix LXS = m.Ld * X * m.S;
  const Matrix SXL = m.Sd * X * m.L;
  const Matrix SXS = m.Sd * X * m.S;
  const auto mu_terms = annihilation_coefficients(eng.pulses(), eng.table(), r, t);
  const auto nu_terms = annihilation_coefficients(eng.pulses(), eng.table(), l, t);

  Complex out = expectation(h, LXL, l, r);
  for (const auto& [mu, c] : mu_terms) {
    const SubsetIndex rmu{r.n, r.bits | (1u << (mu - 1))};
    out += c * expectation(h, LXS, l, rmu);
  }
  for (const auto& [nu, cn] : nu_terms) {
    const SubsetIndex lnu{l.n, l.bits | (1u << (nu - 1))};
    out += std::conj(cn) * expectation(h, SXL, lnu, r);
    for (const auto& [mu, cm] : mu_terms) {
      const SubsetIndex rmu{r.n, r.bits | (1u << (mu - 1))};
      out += std::conj(cn) * cm * expectation(h, SXS, lnu, rmu);
    }
  }
  return out;
}

namespace {

Matrix random_matrix(const CounterRng& rng, std::uint64_t& ctr, int d) {
  Matrix m(d, d);
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) {
      const double re = 2.0 * rng.uniform(ctr++) - 1.0;
      const double im = 2.0 * rng.uniform(ctr++) - 1.0;
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

SystemModel qubit_model() {
  Matrix S = Matrix::Identity(2, 2);
  Matrix L = Matrix::Zero(2, 2);
  L(1, 0) = 1.0;  // sigma_minus in the {|e>, |g>} basis
  Matrix H = Matrix::Zero(2, 2);
  Vector eta(2);
  eta << 0.0, 1.0;
  return make_system(S, L, H, eta);
}

SystemModel generic_model(const CounterRng& rng, std::uint64_t& ctr, int d) {
  const Matrix A = random_matrix(rng, ctr, d);
  const Matrix S = Eigen::HouseholderQR<Matrix>(A).householderQ();
  const Matrix B = random_matrix(rng, ctr, d);
  const Matrix H = 0.5 * (B + B.adjoint());
  const Matrix L = random_matrix(rng, ctr, d);
  Vector eta = Vector::Zero(d);
  eta(0) = 1.0;
  return make_system(S, L, H, eta);
}

double adjointness_deviation(const SystemModel& model, const PulseSet& pulses, int trials,
                             std::uint64_t seed) {
  const HierarchyEngine eng(model, pulses);
  const CounterRng rng(seed);
  std::uint64_t ctr = 0;
  const int d = model.dim();
  const auto& subs = eng.subsets();
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    DensityHierarchy h(eng.n(), d);
    for (auto& comp : h.components()) comp = random_matrix(rng, ctr, d);
    const Matrix X = random_matrix(rng, ctr, d);
    const double t = rng.uniform(ctr++) * pulses.T();
    for (const auto& l : subs) {
      for (const auto& r : subs) {
        const Matrix J = eng.delta_dual(h, l, r, t);
        const Complex lhs = (J.adjoint() * X).trace();
        const Complex rhs = heisenberg_delta_pairing(eng, h, l, r, X, t);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  return worst;
}

PulseSet gaussians(std::vector<GaussianPulse> gs, double T, double dt) {
  std::vector<PulseShape> shapes(gs.begin(), gs.end());
  return PulseSet::make(shapes, T, dt);
}

double fock_reduction_deviation() {
  const SystemModel model = qubit_model();
  const double T = 6.0, dt = 2e-3;
  const int n = 2;
  const PulseSet pulses = gaussians({{2.92, 3.0}, {2.92, 3.0}}, T, dt);

  const MasterSeries series = integrate_master(model, pulses, T, dt, 10);
  FockLadder ladder(model, pulses, n);
  const int steps = static_cast<int>(std::llround(T / dt));
  double worst = 0.0;
  std::size_t snap = 1;
  for (int k = 0; k < steps; ++k) {
    ladder.rk4_step(k * dt, dt);
    if ((k + 1) % 10 == 0 || k + 1 == steps) {
      const DensityHierarchy& h = series.snapshots.at(snap++);
      // All subsets of one size carry the same component when the pulses are
      // identical; compare against the lexicographically first one.
      for (int j = 0; j <= n; ++j) {
        for (int kk = 0; kk <= n; ++kk) {
          const SubsetIndex l{n, j == 0 ? 0u : (1u << j) - 1u};
          const SubsetIndex r{n, kk == 0 ? 0u : (1u << kk) - 1u};
          const Matrix comp = h.fetch(subset_rank(l) - 1, subset_rank(r) - 1);
          const Matrix diff = comp - ladder.comp(n - j, n - kk);
          worst = std::max(worst, diff.cwiseAbs().maxCoeff());
        }
      }
    }
  }
  return worst;
}

}  // namespace

ValidationReport run_validation_suite(std::uint64_t seed) {
  ValidationReport rep;
  auto add = [&rep](const std::string& name, double dev, double tol) {
    rep.checks.push_back({name, dev, tol, dev <= tol});
  };

  add("duality pairing, qubit S = I", verify_duality(qubit_model(), 100, seed).max_abs_deviation,
      1e-12);
  {
    const CounterRng rng(seed + 1);
    std::uint64_t ctr = 0;
    add("duality pairing, d = 3 generic (S, L, H)",
        verify_duality(generic_model(rng, ctr, 3), 100, seed + 2).max_abs_deviation, 1e-12);
  }

  {
    const double T = 10.0, dt = 1e-2;
    const PulseSet pulses = gaussians({{1.46, 3.0}, {2.92, 5.0}}, T, dt);
    add("jump adjointness, qubit, n = 2",
        adjointness_deviation(qubit_model(), pulses, 100, seed + 3), 1e-12);
    const CounterRng rng(seed + 4);
    std::uint64_t ctr = 0;
    add("jump adjointness, d = 3 generic, n = 2",
        adjointness_deviation(generic_model(rng, ctr, 3), pulses, 100, seed + 5), 1e-12);
  }

  {
    double worst = 0.0;
    for (int n = 1; n <= 4; ++n) {
      std::vector<GaussianPulse> gs;
      // Centers sit several widths inside [0, 12] so every profile is
      // normalized on the grid to well below the construction tolerance.
      for (int i = 0; i < n; ++i) gs.push_back({1.2 + 0.45 * i, 4.0 + 0.8 * i});
      const PulseSet pulses = gaussians(gs, 12.0, 1e-2);
      const NormalizationTable table(pulses);
      for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        const SubsetIndex r{n, bits};
        worst = std::max(worst, std::abs(table.value(r) - wick_normalization(pulses, r)));
      }
    }
    add("normalization permanents vs Wick expansion, n <= 4", worst, 1e-10);
  }

  {
    // The closed form assumes unit-norm profiles, so keep both Gaussians far
    // from the domain edges: centered on [0, 20] the grid norms are 1 to
    // machine precision and the identity holds at full accuracy.
    const PulseSet pulses = gaussians({{1.46, 6.0}, {2.92, 6.0}}, 20.0, 1e-2);
    const Matrix G = gram_matrix(pulses);
    const double n2 = normalization(pulses, SubsetIndex{2, 0});
    add("N2 closed form 1 + |<xi1|xi2>|^2", std::abs(n2 - (1.0 + std::norm(G(0, 1)))), 1e-12);
  }

  {
    const CounterRng rng(seed + 6);
    std::uint64_t ctr = 0;
    double worst = 0.0;
    for (int k = 1; k <= 4; ++k) {
      const Matrix A = 0.5 * random_matrix(rng, ctr, k);
      const Matrix G = A.adjoint() * A;
      std::vector<int> idx(k);
      for (int i = 0; i < k; ++i) idx[i] = i;
      worst = std::max(worst, std::abs(permanent(G) - wick_pairing(G, idx, idx)));
    }
    add("permanent vs Wick on random complex Gram, k <= 4", worst, 1e-10);
  }

  add("Fock-ladder reduction, n = 2 identical pulses", fock_reduction_deviation(), 1e-8);
  return rep;
}

}  // namespace pf
