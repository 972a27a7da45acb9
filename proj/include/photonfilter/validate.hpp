#pragma once

#include <cstdint>

#include "photonfilter/engine.hpp"

namespace pf {

// <0| B(xi_{a_1})...B(xi_{a_k}) B*(xi_{b_k})...B*(xi_{b_1}) |0> expanded by
// the commutation rule [B(f), B*(g)] = <f|g>, with no permanent involved.
// Indices are 0-based rows/columns of the Gram matrix.
Complex wick_pairing(const Matrix& gram, const std::vector<int>& a, const std::vector<int>& b);

// N_r through the Wick expansion (oracle for the permanent rule).
double wick_normalization(const PulseSet& pulses, const SubsetIndex& r);

// <Phi_l|Phi_r> through the Wick expansion; 0 when the sizes differ.
Complex wick_overlap(const PulseSet& pulses, const SubsetIndex& l, const SubsetIndex& r);

// Heisenberg-side counting gain, transcribed term by term:
//   Delta^{l;r}(X) = w^{l;r}(L*XL) + sum_{mu not in r} c_mu(r,t) w^{l;r mu}(L*XS)
//                  + sum_{nu not in l} conj(c_nu(l,t)) w^{l nu;r}(S*XL)
//                  + double sum conj(c_nu) c_mu w^{l nu;r mu}(S*XS)
// with w^{a;b}(A) = Tr[(rho^{a;b})^dagger A]. Oracle for delta_dual.
Complex heisenberg_delta_pairing(const HierarchyEngine& eng, const DensityHierarchy& h,
                                 const SubsetIndex& l, const SubsetIndex& r, const Matrix& X,
                                 double t);

struct CheckResult {
  std::string name;
  double deviation = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
};

// Self-contained oracle suite: duality, jump adjointness, permanent vs Wick,
// N2 closed form, Fock-ladder reduction. Deterministic given the seed.
ValidationReport run_validation_suite(std::uint64_t seed = 20240901);

}  // namespace pf
