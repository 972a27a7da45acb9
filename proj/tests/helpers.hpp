#pragma once

#include <cstdint>

#include "photonfilter/config.hpp"
#include "photonfilter/rng.hpp"

namespace th {

// {|e>, |g>} basis: |e> = (1,0), |g> = (0,1), sigma_- = |g><e|.
inline pf::Matrix sigma_minus() {
  pf::Matrix l = pf::Matrix::Zero(2, 2);
  l(1, 0) = 1.0;
  return l;
}

inline pf::Matrix projector_e() {
  pf::Matrix x = pf::Matrix::Zero(2, 2);
  x(0, 0) = 1.0;
  return x;
}

inline pf::Vector ket_g() {
  pf::Vector v(2);
  v << 0.0, 1.0;
  return v;
}

inline pf::Vector ket_e() {
  pf::Vector v(2);
  v << 1.0, 0.0;
  return v;
}

inline pf::SystemModel qubit_ground() {
  return pf::make_system(pf::Matrix::Identity(2, 2), sigma_minus(), pf::Matrix::Zero(2, 2),
                         ket_g());
}

inline pf::SystemModel qubit_excited() {
  return pf::make_system(pf::Matrix::Identity(2, 2), sigma_minus(), pf::Matrix::Zero(2, 2),
                         ket_e());
}

// Nontrivial qubit: scattering phase, drive Hamiltonian. Exercises every
// superoperator block including D_11.
inline pf::SystemModel qubit_full() {
  pf::Matrix s(2, 2);
  s << pf::Complex(std::cos(0.7), std::sin(0.7)), 0.0, 0.0, pf::Complex(std::cos(0.3), -std::sin(0.3));
  pf::Matrix h(2, 2);
  h << 0.4, pf::Complex(0.25, 0.15), pf::Complex(0.25, -0.15), -0.1;
  return pf::make_system(s, sigma_minus(), h, ket_g());
}

inline pf::PulseSet gaussians(const std::vector<pf::GaussianPulse>& gs, double T, double dt) {
  std::vector<pf::PulseShape> shapes(gs.begin(), gs.end());
  return pf::PulseSet::make(shapes, T, dt);
}

inline pf::Matrix random_matrix(const pf::CounterRng& rng, std::uint64_t& ctr, int d) {
  pf::Matrix m(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      const double re = rng.normal(ctr++);
      const double im = rng.normal(ctr++);
      m(r, c) = pf::Complex(re, im);
    }
  }
  return m;
}

inline pf::Matrix random_hermitian(const pf::CounterRng& rng, std::uint64_t& ctr, int d) {
  const pf::Matrix a = random_matrix(rng, ctr, d);
  return 0.5 * (a + a.adjoint());
}

// <xi_1|xi_2> for two normalized Gaussians, closed form.
inline double gaussian_overlap(double om1, double t1, double om2, double t2) {
  const double s2 = om1 * om1 + om2 * om2;
  const double d = t1 - t2;
  return std::sqrt(2.0 * om1 * om2 / s2) * std::exp(-om1 * om1 * om2 * om2 * d * d / (4.0 * s2));
}

inline double max_abs(const pf::Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace th
