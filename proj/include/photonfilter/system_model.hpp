#pragma once

#include "photonfilter/types.hpp"

namespace pf {

// (S,L,H) triple plus the initial system state |eta>. The decay rate kappa is
// folded into L (L = sqrt(kappa) sigma_- for the two-level examples); there is
// no separate kappa parameter.
struct SystemModel {
  Matrix S;
  Matrix L;
  Matrix H;
  Vector initial_state;

  // Cached derived operators, filled by make_system.
  Matrix Sd;   // S^dagger
  Matrix Ld;   // L^dagger
  Matrix LdL;  // L^dagger L
  bool s_is_identity = false;  // ||S - I|| below tolerance: D_11 vanishes identically
  bool h_is_zero = false;

  int dim() const { return static_cast<int>(L.rows()); }
};

// Validates S unitary, H Hermitian and ||initial_state|| = 1, all within `tol`.
// Throws std::invalid_argument naming the offending operand.
SystemModel make_system(const Matrix& S, const Matrix& L, const Matrix& H,
                        const Vector& initial_state, double tol = 1e-12);

}  // namespace pf
