#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace pf {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline bool is_finite(const Matrix& m) {
  return m.allFinite();
}

// Hermitian observable with a label used in output columns.
struct Observable {
  std::string label;
  Matrix X;
};

}  // namespace pf
