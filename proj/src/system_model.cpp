#include "photonfilter/system_model.hpp"

#include <sstream>
#include <stdexcept>

namespace pf {

namespace {

void require_square(const Matrix& m, int d, const char* name) {
  if (m.rows() != d || m.cols() != d) {
    std::ostringstream os;
    os << name << " must be " << d << "x" << d << ", got " << m.rows() << "x" << m.cols();
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

SystemModel make_system(const Matrix& S, const Matrix& L, const Matrix& H,
                        const Vector& initial_state, double tol) {
  const int d = static_cast<int>(L.rows());
  if (d < 1) throw std::invalid_argument("L must be a nonempty square matrix");
  require_square(L, d, "L");
  require_square(S, d, "S");
  require_square(H, d, "H");
  if (initial_state.size() != d) {
    std::ostringstream os;
    os << "initial_state must have dimension " << d << ", got " << initial_state.size();
    throw std::invalid_argument(os.str());
  }

  const Matrix id = Matrix::Identity(d, d);
  const double unit_dev = std::max((S.adjoint() * S - id).cwiseAbs().maxCoeff(),
                                   (S * S.adjoint() - id).cwiseAbs().maxCoeff());
  if (unit_dev > tol) {
    std::ostringstream os;
    os << "S is not unitary: max |S^*S - I| = " << unit_dev << " exceeds " << tol;
    throw std::invalid_argument(os.str());
  }
  const double herm_dev = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > tol) {
    std::ostringstream os;
    os << "H is not Hermitian: max |H - H^*| = " << herm_dev << " exceeds " << tol;
    throw std::invalid_argument(os.str());
  }
  const double norm_dev = std::abs(initial_state.norm() - 1.0);
  if (norm_dev > tol) {
    std::ostringstream os;
    os << "initial_state is not normalized: | ||eta|| - 1 | = " << norm_dev << " exceeds " << tol;
    throw std::invalid_argument(os.str());
  }
  if (!is_finite(S) || !is_finite(L) || !is_finite(H) || !initial_state.allFinite()) {
    throw std::invalid_argument("model matrices must be finite");
  }

  SystemModel m;
  m.S = S;
  m.L = L;
  m.H = H;
  m.initial_state = initial_state;
  m.Sd = S.adjoint();
  m.Ld = L.adjoint();
  m.LdL = m.Ld * L;
  m.s_is_identity = (S - id).cwiseAbs().maxCoeff() <= tol;
  m.h_is_zero = H.cwiseAbs().maxCoeff() <= tol;
  return m;
}

}  // namespace pf
