#include "photonfilter/superop.hpp"

#include <sstream>
#include <stdexcept>

#include "photonfilter/rng.hpp"

namespace pf {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_dim(const Matrix& x, int d, const char* name) {
  if (x.rows() != d || x.cols() != d) {
    std::ostringstream os;
    os << name << " must be " << d << "x" << d << ", got " << x.rows() << "x" << x.cols();
    throw std::invalid_argument(os.str());
  }
}

Matrix random_matrix(const CounterRng& rng, std::uint64_t& ctr, int d) {
  Matrix m(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      const double re = rng.normal(ctr++);
      const double im = rng.normal(ctr++);
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

}  // namespace

Matrix apply_heisenberg_superop(Jk which, const SystemModel& m, const Matrix& X) {
  require_dim(X, m.dim(), "X");
  switch (which) {
    case Jk::jk00:
      // 1/2 L^*[X,L] + 1/2 [L^*,X]L - i[X,H]  =  L^*XL - 1/2{L^*L, X} - i[X,H]
      return m.Ld * X * m.L - 0.5 * (m.LdL * X + X * m.LdL) - kI * (X * m.H - m.H * X);
    case Jk::jk01:
      return (m.Ld * X - X * m.Ld) * m.S;
    case Jk::jk10:
      return m.Sd * (X * m.L - m.L * X);
    case Jk::jk11:
      return m.Sd * X * m.S - X;
  }
  throw std::invalid_argument("unknown superoperator block");
}

Matrix apply_schrodinger_superop(Jk which, const SystemModel& m, const Matrix& rho) {
  require_dim(rho, m.dim(), "rho");
  switch (which) {
    case Jk::jk00:
      // 1/2 [L rho, L^*] + 1/2 [L, rho L^*] - i[H, rho]  =  L rho L^* - 1/2{L^*L, rho} - i[H, rho]
      return m.L * rho * m.Ld - 0.5 * (m.LdL * rho + rho * m.LdL) - kI * (m.H * rho - rho * m.H);
    case Jk::jk01:
      return m.S * rho * m.Ld - m.Ld * m.S * rho;
    case Jk::jk10:
      return m.L * rho * m.Sd - rho * m.Sd * m.L;
    case Jk::jk11:
      return m.S * rho * m.Sd - rho;
  }
  throw std::invalid_argument("unknown superoperator block");
}

DualityReport verify_duality(const SystemModel& m, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const int d = m.dim();
  CounterRng rng(seed);
  std::uint64_t ctr = 0;

  // Schroedinger block jk pairs with the Heisenberg block whose indices are
  // swapped on the off-diagonal: (00,00), (01,10), (10,01), (11,11).
  static constexpr Jk schrod[4] = {Jk::jk00, Jk::jk01, Jk::jk10, Jk::jk11};
  static constexpr Jk heis[4] = {Jk::jk00, Jk::jk10, Jk::jk01, Jk::jk11};

  DualityReport report;
  report.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    const Matrix rho = random_matrix(rng, ctr, d);
    const Matrix X = random_matrix(rng, ctr, d);
    for (int b = 0; b < 4; ++b) {
      const Complex lhs = (apply_schrodinger_superop(schrod[b], m, rho).adjoint() * X).trace();
      const Complex rhs = (rho.adjoint() * apply_heisenberg_superop(heis[b], m, X)).trace();
      report.max_abs_deviation = std::max(report.max_abs_deviation, std::abs(lhs - rhs));
    }
  }
  return report;
}

}  // namespace pf
