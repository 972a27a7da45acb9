#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "helpers.hpp"
#include "photonfilter/pulse.hpp"

using namespace pf;

TEST_CASE("gaussian pulses are normalized on the grid") {
  const PulseSet p = th::gaussians({{1.46, 3.0}, {2.92, 3.0}, {2.92, 5.5}}, 12.0, 1e-3);
  REQUIRE(p.n() == 3);
  for (int i = 0; i < p.n(); ++i) CHECK(std::abs(p.norm(i) - 1.0) < 1e-3);
}

TEST_CASE("gram matrix matches the gaussian closed forms") {
  const double T = 20.0, dt = 1e-3;
  SUBCASE("same width, shifted centers") {
    const PulseSet p = th::gaussians({{2.92, 3.0}, {2.92, 5.5}}, T, dt);
    const Matrix g = gram_matrix(p);
    const double expected = std::exp(-2.92 * 2.92 * 2.5 * 2.5 / 8.0);
    CHECK(std::abs(g(0, 1).real() - expected) < 1e-6);
    CHECK(std::abs(g(0, 1).imag()) < 1e-12);
    CHECK(std::abs(g(0, 0).real() - 1.0) < 1e-6);
    CHECK(th::max_abs(g - g.adjoint()) < 1e-14);
  }
  SUBCASE("octave-separated widths, same center") {
    const PulseSet p = th::gaussians({{1.46, 3.0}, {2.92, 3.0}}, T, dt);
    const Matrix g = gram_matrix(p);
    CHECK(std::abs(g(0, 1).real() - std::sqrt(0.8)) < 1e-6);
    CHECK(std::abs(g(0, 1).real() - th::gaussian_overlap(1.46, 3.0, 2.92, 3.0)) < 1e-6);
  }
  SUBCASE("well-separated pulses are nearly orthogonal") {
    const PulseSet p = th::gaussians({{2.92, 3.0}, {2.92, 12.0}}, T, dt);
    CHECK(std::abs(gram_matrix(p)(0, 1)) < 1e-6);
  }
}

TEST_CASE("pulse values interpolate and vanish outside the grid") {
  const PulseSet p = th::gaussians({{1.46, 3.0}}, 10.0, 0.5);
  const Complex mid = p.value(0, 0.25);
  CHECK(std::abs(mid - 0.5 * (p.value(0, 0.0) + p.value(0, 0.5))) < 1e-14);
  CHECK(std::abs(p.value(0, -0.1)) == 0.0);
  CHECK(std::abs(p.value(0, 10.1)) == 0.0);
}

TEST_CASE("unnormalized pulse is rejected with the pulse index") {
  std::vector<PulseShape> shapes = {GaussianPulse{1.46, 3.0}};
  // Horizon too short: most of the mass lies outside [0, 2].
  CHECK_THROWS_WITH_AS(PulseSet::make(shapes, 2.0, 1e-3), doctest::Contains("pulse"),
                       std::invalid_argument);
}

TEST_CASE("tabulated pulse round-trips through a file") {
  const std::string path = "tmp_pulse_tab.csv";
  {
    // Complex-valued chirped gaussian, normalized on [0, 10].
    const double om = 2.0, tc = 5.0, chirp = 1.3;
    std::ofstream out(path);
    out << "# t, re, im\n";
    for (int k = 0; k <= 10000; ++k) {
      const double t = k * 1e-3;
      const double amp = std::pow(om * om / (2.0 * M_PI), 0.25) *
                         std::exp(-om * om * (t - tc) * (t - tc) / 4.0);
      const double phase = chirp * (t - tc) * (t - tc);
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", t, amp * std::cos(phase),
                    amp * std::sin(phase));
      out << buf;
    }
  }
  const PulseSet p = PulseSet::make({TabulatedPulse{path}}, 10.0, 1e-3);
  CHECK(std::abs(p.norm(0) - 1.0) < 1e-3);
  CHECK(std::abs(p.value(0, 5.0).real() - std::pow(4.0 / (2.0 * M_PI), 0.25)) < 1e-6);
  CHECK(std::abs(p.value(0, 6.0)) > 0.0);
  CHECK(p.value(0, 6.0).imag() != 0.0);
  std::remove(path.c_str());
}

TEST_CASE("tabulated pulse parse errors carry line numbers") {
  const std::string path = "tmp_pulse_bad.csv";
  {
    std::ofstream out(path);
    out << "0.0,1.0\n0.1,nonsense\n";
  }
  CHECK_THROWS_WITH_AS(PulseSet::make({TabulatedPulse{path}}, 1.0, 0.1), doctest::Contains("2"),
                       std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("empty pulse set is allowed (vacuum field)") {
  const PulseSet p = PulseSet::make({}, 1.0, 0.1);
  CHECK(p.n() == 0);
  CHECK(gram_matrix(p).rows() == 0);
}
