#include "photonfilter/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pf {

namespace {

std::vector<Complex> sample_gaussian(const GaussianPulse& g, double T, double dt, int points) {
  // xi(t) = (Omega^2 / 2 pi)^{1/4} exp(-Omega^2 (t - t_c)^2 / 4)
  const double amp = std::pow(g.omega * g.omega / (2.0 * M_PI), 0.25);
  std::vector<Complex> out(points);
  for (int k = 0; k < points; ++k) {
    const double t = std::min(k * dt, T);
    const double arg = g.omega * (t - g.center);
    out[k] = amp * std::exp(-arg * arg / 4.0);
  }
  return out;
}

std::vector<Complex> sample_tabulated(const TabulatedPulse& p, double T, double dt, int points) {
  std::ifstream in(p.path);
  if (!in) throw std::invalid_argument("cannot open pulse file: " + p.path);
  std::vector<double> ts;
  std::vector<Complex> vs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    double t, re, im = 0.0;
    if (!(ls >> t >> re)) {
      std::ostringstream os;
      os << p.path << ":" << lineno << ": expected `t,re[,im]`";
      throw std::invalid_argument(os.str());
    }
    ls >> im;
    if (!ts.empty() && t <= ts.back()) {
      std::ostringstream os;
      os << p.path << ":" << lineno << ": time column must be strictly increasing";
      throw std::invalid_argument(os.str());
    }
    ts.push_back(t);
    vs.push_back(Complex(re, im));
  }
  if (ts.size() < 2) throw std::invalid_argument(p.path + ": need at least two samples");

  std::vector<Complex> out(points);
  std::size_t j = 0;
  for (int k = 0; k < points; ++k) {
    const double t = std::min(k * dt, T);
    if (t < ts.front() || t > ts.back()) {
      out[k] = Complex(0.0, 0.0);
      continue;
    }
    while (j + 2 < ts.size() && ts[j + 1] < t) ++j;
    const double w = (t - ts[j]) / (ts[j + 1] - ts[j]);
    out[k] = (1.0 - w) * vs[j] + w * vs[j + 1];
  }
  return out;
}

}  // namespace

PulseSet PulseSet::make(const std::vector<PulseShape>& shapes, double T, double dt,
                        double norm_tol) {
  if (T <= 0.0 || dt <= 0.0) throw std::invalid_argument("pulse grid needs T > 0 and dt > 0");
  PulseSet ps;
  ps.T_ = T;
  ps.dt_ = dt;
  ps.shapes_ = shapes;
  const int points = static_cast<int>(std::llround(T / dt)) + 1;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    std::vector<Complex> s;
    if (const auto* g = std::get_if<GaussianPulse>(&shapes[i])) {
      if (g->omega <= 0.0) throw std::invalid_argument("gaussian pulse needs omega > 0");
      s = sample_gaussian(*g, T, dt, points);
    } else {
      s = sample_tabulated(std::get<TabulatedPulse>(shapes[i]), T, dt, points);
    }
    ps.samples_.push_back(std::move(s));
    const double nrm = ps.norm(static_cast<int>(i));
    if (std::abs(nrm - 1.0) > norm_tol) {
      std::ostringstream os;
      os << "pulse " << (i + 1) << " is not normalized on [0," << T << "]: ||xi|| = " << nrm
         << " deviates from 1 by more than " << norm_tol;
      throw std::invalid_argument(os.str());
    }
  }
  return ps;
}

Complex PulseSet::value(int i, double t) const {
  const auto& s = samples_[i];
  // Tolerate a few ulps of caller rounding at the edges: a stage time that is
  // mathematically 0 or T (e.g. accumulated as k*dt + dt) must not fall off
  // the grid and silently zero the profile.
  const double slop = 4.0 * std::numeric_limits<double>::epsilon() * T_;
  if (t < -slop || t > T_ + slop) return Complex(0.0, 0.0);
  const double x = std::clamp(t, 0.0, T_) / dt_;
  const int k = std::min(static_cast<int>(x), static_cast<int>(s.size()) - 2);
  const double w = x - k;
  return (1.0 - w) * s[k] + w * s[k + 1];
}

double PulseSet::norm(int i) const {
  const auto& s = samples_[i];
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double w = (k == 0 || k + 1 == s.size()) ? 0.5 : 1.0;
    acc += w * std::norm(s[k]);
  }
  return std::sqrt(acc * dt_);
}

Matrix gram_matrix(const PulseSet& pulses) {
  const int n = pulses.n();
  Matrix g = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const auto& a = pulses.samples(i);
      const auto& b = pulses.samples(j);
      Complex acc(0.0, 0.0);
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double w = (k == 0 || k + 1 == a.size()) ? 0.5 : 1.0;
        acc += w * std::conj(a[k]) * b[k];
      }
      acc *= pulses.dt();
      g(i, j) = acc;
      g(j, i) = std::conj(acc);
    }
  }
  return g;
}

}  // namespace pf
