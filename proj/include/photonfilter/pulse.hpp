#pragma once

#include <string>
#include <variant>
#include <vector>

#include "photonfilter/types.hpp"

namespace pf {

struct GaussianPulse {
  double omega = 1.0;
  double center = 0.0;
};

// Two-column CSV "t,re[,im]"; resampled onto the run grid by linear interpolation.
struct TabulatedPulse {
  std::string path;
};

using PulseShape = std::variant<GaussianPulse, TabulatedPulse>;

// n wavepacket profiles xi_i sampled on the uniform grid {0, dt, ..., T}.
// Each profile must be L2-normalized on the truncated grid within norm_tol.
class PulseSet {
 public:
  PulseSet() = default;

  static PulseSet make(const std::vector<PulseShape>& shapes, double T, double dt,
                       double norm_tol = 1e-3);

  int n() const { return static_cast<int>(samples_.size()); }
  double T() const { return T_; }
  double dt() const { return dt_; }
  int grid_points() const { return samples_.empty() ? 0 : static_cast<int>(samples_[0].size()); }

  // Linear interpolation between grid samples; 0 outside [0, T].
  Complex value(int i, double t) const;

  const std::vector<Complex>& samples(int i) const { return samples_[i]; }
  const std::vector<PulseShape>& shapes() const { return shapes_; }

  double norm(int i) const;  // trapezoidal L2 norm on the grid

 private:
  double T_ = 0.0;
  double dt_ = 0.0;
  std::vector<std::vector<Complex>> samples_;
  std::vector<PulseShape> shapes_;
};

// G_ij = <xi_i|xi_j> by trapezoidal quadrature; Hermitian positive semidefinite.
Matrix gram_matrix(const PulseSet& pulses);

}  // namespace pf
