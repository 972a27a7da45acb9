#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <photonfilter/rng.hpp>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

using pf::CounterRng;

TEST_CASE("same seed and counter reproduce the same stream") {
  CounterRng a(12345);
  CounterRng b(12345);
  for (std::uint64_t c = 0; c < 256; ++c) {
    CHECK(a.uniform(c) == b.uniform(c));
    CHECK(a.normal(c) == b.normal(c));
  }
}

TEST_CASE("draws are pure functions of the counter, not of call order") {
  CounterRng rng(99);
  // Read counters out of order, then in order; values must agree.
  const double u7 = rng.uniform(7);
  const double u3 = rng.uniform(3);
  const double n5 = rng.normal(5);
  CHECK(rng.uniform(3) == u3);
  CHECK(rng.uniform(7) == u7);
  CHECK(rng.normal(5) == n5);
  // Re-reading many times never perturbs anything.
  for (int rep = 0; rep < 4; ++rep) CHECK(rng.normal(5) == n5);
}

TEST_CASE("different seeds decorrelate the streams") {
  CounterRng a(1);
  CounterRng b(2);
  int agree = 0;
  const int n = 1024;
  for (std::uint64_t c = 0; c < n; ++c) {
    if (std::abs(a.uniform(c) - b.uniform(c)) < 1e-12) ++agree;
  }
  CHECK(agree == 0);
}

TEST_CASE("uniform draws live in (0, 1] and have the right first moments") {
  CounterRng rng(2024);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0, lo = 1.0, hi = 0.0;
  for (std::uint64_t c = 0; c < n; ++c) {
    const double u = rng.uniform(c);
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    sum += u;
    sumsq += u * u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  // Standard error of the mean is ~1/sqrt(12 n) ~ 6.5e-4; allow 5 sigma.
  CHECK(std::abs(mean - 0.5) < 5.0 / std::sqrt(12.0 * n));
  CHECK(std::abs(var - 1.0 / 12.0) < 3e-3);
  CHECK(lo < 1e-4);      // stream actually explores the low end
  CHECK(hi > 1.0 - 1e-4);
}

TEST_CASE("normal draws have zero mean, unit variance, and sane tails") {
  CounterRng rng(77);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0, sum3 = 0.0;
  int beyond4 = 0;
  for (std::uint64_t c = 0; c < n; ++c) {
    const double x = rng.normal(c);
    CHECK(std::isfinite(x));
    sum += x;
    sumsq += x * x;
    sum3 += x * x * x;
    if (std::abs(x) > 4.0) ++beyond4;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  const double skew = sum3 / n;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) < 2e-2);
  CHECK(std::abs(skew) < 5e-2);
  // P(|X|>4) ~ 6.3e-5, so expect ~13 of 200k; nothing pathological.
  CHECK(beyond4 < 60);
}

TEST_CASE("consecutive normal counters are uncorrelated") {
  CounterRng rng(31415);
  const int n = 100000;
  double cross = 0.0;
  for (std::uint64_t c = 0; c + 1 < n; ++c) {
    cross += rng.normal(c) * rng.normal(c + 1);
  }
  CHECK(std::abs(cross / (n - 1)) < 2e-2);
}

TEST_CASE("uniform counters have no visible lag-1 correlation") {
  CounterRng rng(8);
  const int n = 100000;
  double cross = 0.0;
  for (std::uint64_t c = 0; c + 1 < n; ++c) {
    cross += (rng.uniform(c) - 0.5) * (rng.uniform(c + 1) - 0.5);
  }
  CHECK(std::abs(cross / (n - 1)) < 2e-3);
}

TEST_CASE("distinct counters produce distinct uniforms") {
  CounterRng rng(555);
  std::set<double> seen;
  for (std::uint64_t c = 0; c < 4096; ++c) seen.insert(rng.uniform(c));
  CHECK(seen.size() == 4096);
}
