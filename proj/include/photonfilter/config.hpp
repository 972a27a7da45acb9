#pragma once

#include <cstdint>

#include "photonfilter/ensemble.hpp"

namespace pf {

// Fully expanded run description. Parsed from flat key-value text with dotted
// section keys; presets expand before explicit keys are applied, so any key
// can override a preset value.
struct RunConfig {
  std::string preset;
  int dim = 0;
  Matrix S, L, H;        // row-major complex lists in the file
  Vector initial_state;
  int n_photons = 0;
  std::vector<PulseShape> pulses;
  double t_final = 10.0;
  double dt = 1e-3;
  int stride = 1;
  Detection detection = Detection::homodyne;
  std::uint64_t seed = 1;
  int N = 1;
  bool renormalize = false;
  int threads = 0;
  std::vector<Observable> observables;
};

std::vector<std::string> preset_names();

// Named experiment presets (two-level atom, two Gaussian photons).
RunConfig preset_config(const std::string& name);

// Errors carry the key path (e.g. "system.H") plus the line number in `origin`.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

// Round-trips through parse_config_text to an equivalent RunConfig.
// Complex values use (re,im) with 17 significant digits.
std::string serialize_config(const RunConfig& cfg);

SystemModel build_model(const RunConfig& cfg);
PulseSet build_pulses(const RunConfig& cfg);  // sampled on the run grid (step = dt)

}  // namespace pf
