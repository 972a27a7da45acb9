#pragma once

#include <cstdint>

#include "photonfilter/system_model.hpp"

namespace pf {

// The four superoperator blocks indexed jk in {00, 01, 10, 11}.
enum class Jk { jk00 = 0, jk01 = 1, jk10 = 2, jk11 = 3 };

// Heisenberg picture:
//   L_00(X) = 1/2 L^*[X,L] + 1/2 [L^*,X]L - i[X,H]
//   L_01(X) = [L^*,X]S
//   L_10(X) = S^*[X,L]      ( = (L_01(X^*))^* )
//   L_11(X) = S^*XS - X
Matrix apply_heisenberg_superop(Jk which, const SystemModel& m, const Matrix& X);

// Schroedinger picture:
//   D_00(rho) = 1/2 [L rho, L^*] + 1/2 [L, rho L^*] - i[H, rho]
//   D_01(rho) = [S rho, L^*]
//   D_10(rho) = [L, rho S^*]
//   D_11(rho) = S rho S^* - rho
Matrix apply_schrodinger_superop(Jk which, const SystemModel& m, const Matrix& rho);

struct DualityReport {
  int trials = 0;
  double max_abs_deviation = 0.0;
};

// Trace pairing between the pictures on random (rho, X) draws. The pairing is
// crossed on the off-diagonal blocks:
//   Tr[(D_00(rho))^* X] = Tr[rho^* L_00(X)]    Tr[(D_01(rho))^* X] = Tr[rho^* L_10(X)]
//   Tr[(D_10(rho))^* X] = Tr[rho^* L_01(X)]    Tr[(D_11(rho))^* X] = Tr[rho^* L_11(X)]
DualityReport verify_duality(const SystemModel& m, int trials, std::uint64_t seed = 12345);

}  // namespace pf
