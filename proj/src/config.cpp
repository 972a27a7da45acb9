#include "photonfilter/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pf {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt17(Complex v) { return "(" + fmt17(v.real()) + "," + fmt17(v.imag()) + ")"; }

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << msg;
  throw std::invalid_argument(os.str());
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct Entry {
  std::string key, value;
  int line = 0;
};

std::vector<Entry> tokenize(const std::string& text, const std::string& origin) {
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(origin, line, "expected 'key = value'");
    Entry e{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (e.key.empty()) fail(origin, line, "empty key");
    entries.push_back(std::move(e));
  }
  return entries;
}

// "(re,im)" tokens separated by whitespace.
std::vector<Complex> parse_complex_list(const std::string& value, const std::string& origin,
                                        int line, const std::string& key) {
  std::vector<Complex> out;
  std::size_t i = 0;
  while (i < value.size()) {
    while (i < value.size() && std::isspace(static_cast<unsigned char>(value[i]))) ++i;
    if (i >= value.size()) break;
    if (value[i] != '(') fail(origin, line, key + ": expected '(re,im)', got '" + value.substr(i) + "'");
    const std::size_t close = value.find(')', i);
    if (close == std::string::npos) fail(origin, line, key + ": unterminated complex literal");
    const std::string body = value.substr(i + 1, close - i - 1);
    const std::size_t comma = body.find(',');
    if (comma == std::string::npos) fail(origin, line, key + ": complex literal needs 're,im'");
    try {
      std::size_t used = 0;
      const double re = std::stod(body.substr(0, comma), &used);
      const double im = std::stod(body.substr(comma + 1), &used);
      out.emplace_back(re, im);
    } catch (const std::exception&) {
      fail(origin, line, key + ": cannot parse complex literal '(" + body + ")'");
    }
    i = close + 1;
  }
  if (out.empty()) fail(origin, line, key + ": expected at least one '(re,im)' value");
  return out;
}

double parse_double(const std::string& value, const std::string& origin, int line,
                    const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(origin, line, key + ": cannot parse number '" + value + "'");
  }
}

long long parse_int(const std::string& value, const std::string& origin, int line,
                    const std::string& key) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(origin, line, key + ": cannot parse integer '" + value + "'");
  }
}

bool parse_bool(const std::string& value, const std::string& origin, int line,
                const std::string& key) {
  if (value == "true") return true;
  if (value == "false") return false;
  fail(origin, line, key + ": expected 'true' or 'false', got '" + value + "'");
}

PulseShape parse_pulse(const std::string& value, const std::string& origin, int line,
                       const std::string& key) {
  std::istringstream in(value);
  std::string kind;
  in >> kind;
  if (kind == "gaussian") {
    GaussianPulse g;
    if (!(in >> g.omega >> g.center))
      fail(origin, line, key + ": expected 'gaussian <omega> <center>'");
    std::string rest;
    if (in >> rest) fail(origin, line, key + ": trailing input '" + rest + "'");
    if (g.omega <= 0.0) fail(origin, line, key + ": omega must be positive");
    return g;
  }
  if (kind == "file") {
    std::string path;
    if (!(in >> path)) fail(origin, line, key + ": expected 'file <path>'");
    return TabulatedPulse{path};
  }
  fail(origin, line, key + ": unknown pulse kind '" + kind + "' (use gaussian/file)");
}

Matrix to_matrix(const std::vector<Complex>& entries, int dim, const std::string& origin, int line,
                 const std::string& key) {
  if (static_cast<int>(entries.size()) != dim * dim) {
    std::ostringstream os;
    os << key << ": expected " << dim * dim << " entries for dim " << dim << ", got "
       << entries.size();
    fail(origin, line, os.str());
  }
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = entries[r * dim + c];
  return m;
}

// Split "observable.<idx>.<field>" style keys.
bool split_indexed(const std::string& key, const std::string& prefix, int& idx,
                   std::string& field) {
  if (key.rfind(prefix + ".", 0) != 0) return false;
  std::string rest = key.substr(prefix.size() + 1);
  const std::size_t dot = rest.find('.');
  field = dot == std::string::npos ? "" : rest.substr(dot + 1);
  const std::string num = dot == std::string::npos ? rest : rest.substr(0, dot);
  if (num.empty()) return false;
  for (char ch : num)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  idx = std::stoi(num);
  return true;
}

struct RawObservable {
  std::string label;
  std::vector<Complex> matrix;
  int line = 0;
};

RunConfig assemble(const std::vector<Entry>& entries, const std::string& origin) {
  RunConfig cfg;
  bool from_preset = false;
  std::vector<Complex> s_raw, l_raw, h_raw, eta_raw;
  int s_line = 0, l_line = 0, h_line = 0, eta_line = 0;
  std::map<int, PulseShape> pulse_map;
  std::map<int, RawObservable> obs_map;

  // The preset key must come first so later keys override its values.
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].key != "preset") continue;
    if (i != 0) fail(origin, entries[i].line, "preset must be the first key");
    cfg = preset_config(entries[i].value);
    from_preset = true;
  }

  for (const Entry& e : entries) {
    const std::string& k = e.key;
    int idx = 0;
    std::string field;
    if (k == "preset") {
      continue;
    } else if (k == "system.dim") {
      cfg.dim = static_cast<int>(parse_int(e.value, origin, e.line, k));
      if (cfg.dim < 2) fail(origin, e.line, "system.dim: must be >= 2");
    } else if (k == "system.S") {
      s_raw = parse_complex_list(e.value, origin, e.line, k);
      s_line = e.line;
    } else if (k == "system.L") {
      l_raw = parse_complex_list(e.value, origin, e.line, k);
      l_line = e.line;
    } else if (k == "system.H") {
      h_raw = parse_complex_list(e.value, origin, e.line, k);
      h_line = e.line;
    } else if (k == "system.initial_state") {
      eta_raw = parse_complex_list(e.value, origin, e.line, k);
      eta_line = e.line;
    } else if (k == "field.n") {
      const long long n = parse_int(e.value, origin, e.line, k);
      if (n < 0 || n > 10) fail(origin, e.line, "field.n: must be in [0, 10]");
      cfg.n_photons = static_cast<int>(n);
    } else if (split_indexed(k, "field.pulse", idx, field) && field.empty()) {
      pulse_map[idx] = parse_pulse(e.value, origin, e.line, k);
    } else if (k == "time.t_final") {
      cfg.t_final = parse_double(e.value, origin, e.line, k);
      if (cfg.t_final <= 0.0) fail(origin, e.line, "time.t_final: must be positive");
    } else if (k == "time.dt") {
      cfg.dt = parse_double(e.value, origin, e.line, k);
      if (cfg.dt <= 0.0) fail(origin, e.line, "time.dt: must be positive");
    } else if (k == "time.stride") {
      cfg.stride = static_cast<int>(parse_int(e.value, origin, e.line, k));
      if (cfg.stride < 1) fail(origin, e.line, "time.stride: must be >= 1");
    } else if (k == "detection.mode") {
      if (e.value == "homodyne")
        cfg.detection = Detection::homodyne;
      else if (e.value == "photocount")
        cfg.detection = Detection::photocount;
      else
        fail(origin, e.line, "detection.mode: expected homodyne or photocount, got '" + e.value + "'");
    } else if (k == "detection.seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(e.value, origin, e.line, k));
    } else if (k == "detection.N") {
      cfg.N = static_cast<int>(parse_int(e.value, origin, e.line, k));
      if (cfg.N < 1) fail(origin, e.line, "detection.N: must be >= 1");
    } else if (k == "detection.renormalize") {
      cfg.renormalize = parse_bool(e.value, origin, e.line, k);
    } else if (k == "detection.threads") {
      cfg.threads = static_cast<int>(parse_int(e.value, origin, e.line, k));
      if (cfg.threads < 0) fail(origin, e.line, "detection.threads: must be >= 0");
    } else if (split_indexed(k, "observable", idx, field) && field == "label") {
      obs_map[idx].label = e.value;
      obs_map[idx].line = e.line;
    } else if (split_indexed(k, "observable", idx, field) && field == "matrix") {
      obs_map[idx].matrix = parse_complex_list(e.value, origin, e.line, k);
      obs_map[idx].line = e.line;
    } else {
      fail(origin, e.line, "unknown key '" + k + "'");
    }
  }

  if (cfg.dim == 0) fail(origin, 0, "system.dim: missing");
  if (!s_raw.empty()) cfg.S = to_matrix(s_raw, cfg.dim, origin, s_line, "system.S");
  if (!l_raw.empty()) cfg.L = to_matrix(l_raw, cfg.dim, origin, l_line, "system.L");
  if (!h_raw.empty()) cfg.H = to_matrix(h_raw, cfg.dim, origin, h_line, "system.H");
  if (!eta_raw.empty()) {
    if (static_cast<int>(eta_raw.size()) != cfg.dim) {
      std::ostringstream os;
      os << "system.initial_state: expected " << cfg.dim << " entries, got " << eta_raw.size();
      fail(origin, eta_line, os.str());
    }
    cfg.initial_state = Vector(cfg.dim);
    for (int i = 0; i < cfg.dim; ++i) cfg.initial_state(i) = eta_raw[i];
  }
  if (!pulse_map.empty() || !from_preset) cfg.pulses.clear();
  for (const auto& [idx, shape] : pulse_map) {
    if (idx != static_cast<int>(cfg.pulses.size()) + 1)
      fail(origin, 0, "field.pulse indices must be contiguous from 1");
    cfg.pulses.push_back(shape);
  }
  if (!obs_map.empty() || !from_preset) cfg.observables.clear();
  for (const auto& [idx, raw] : obs_map) {
    if (idx != static_cast<int>(cfg.observables.size()) + 1)
      fail(origin, raw.line, "observable indices must be contiguous from 1");
    if (raw.label.empty())
      fail(origin, raw.line, "observable." + std::to_string(idx) + ".label: missing");
    if (raw.matrix.empty())
      fail(origin, raw.line, "observable." + std::to_string(idx) + ".matrix: missing");
    Observable o;
    o.label = raw.label;
    o.X = to_matrix(raw.matrix, cfg.dim, origin, raw.line,
                    "observable." + std::to_string(idx) + ".matrix");
    cfg.observables.push_back(std::move(o));
  }

  // Structural validation with key-path messages.
  if (cfg.S.rows() != cfg.dim) fail(origin, 0, "system.S: missing");
  if (cfg.L.rows() != cfg.dim) fail(origin, 0, "system.L: missing");
  if (cfg.H.rows() != cfg.dim) fail(origin, 0, "system.H: missing");
  if (cfg.initial_state.size() != cfg.dim) fail(origin, 0, "system.initial_state: missing");
  const double s_err =
      (cfg.S.adjoint() * cfg.S - Matrix::Identity(cfg.dim, cfg.dim)).cwiseAbs().maxCoeff();
  if (s_err > 1e-12) {
    std::ostringstream os;
    os << "system.S: not unitary (max |S^dagger S - I| = " << s_err << ")";
    fail(origin, s_line, os.str());
  }
  const double h_err = (cfg.H - cfg.H.adjoint()).cwiseAbs().maxCoeff();
  if (h_err > 1e-12) {
    std::ostringstream os;
    os << "system.H: not Hermitian (max |H - H^dagger| = " << h_err << ")";
    fail(origin, h_line, os.str());
  }
  const double eta_err = std::abs(cfg.initial_state.norm() - 1.0);
  if (eta_err > 1e-12) {
    std::ostringstream os;
    os << "system.initial_state: not normalized (|norm - 1| = " << eta_err << ")";
    fail(origin, eta_line, os.str());
  }
  for (std::size_t i = 0; i < cfg.observables.size(); ++i) {
    const Matrix& X = cfg.observables[i].X;
    if ((X - X.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      fail(origin, 0, "observable." + std::to_string(i + 1) + ".matrix: not Hermitian");
  }
  if (static_cast<int>(cfg.pulses.size()) != cfg.n_photons) {
    std::ostringstream os;
    os << "field.n: " << cfg.n_photons << " photons but " << cfg.pulses.size()
       << " field.pulse entries";
    fail(origin, 0, os.str());
  }
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"atom-2photon-a", "atom-2photon-b", "atom-2photon-c", "atom-2photon-d"};
}

RunConfig preset_config(const std::string& name) {
  double omega1 = 0.0, omega2 = 0.0, t1 = 3.0, t2 = 3.0, t_final = 10.0;
  if (name == "atom-2photon-a") {
    omega1 = omega2 = 1.46;
  } else if (name == "atom-2photon-b") {
    omega1 = omega2 = 2.92;
  } else if (name == "atom-2photon-c") {
    omega1 = 1.46;
    omega2 = 2.92;
  } else if (name == "atom-2photon-d") {
    omega1 = omega2 = 2.92;
    t2 = 5.5;
    t_final = 12.0;
  } else {
    throw std::invalid_argument("unknown preset '" + name + "' (available: atom-2photon-a/b/c/d)");
  }

  RunConfig cfg;
  cfg.preset = name;
  cfg.dim = 2;
  cfg.S = Matrix::Identity(2, 2);
  cfg.L = Matrix::Zero(2, 2);
  cfg.L(1, 0) = 1.0;  // sigma_minus at kappa = 1 in the {|e>, |g>} basis
  cfg.H = Matrix::Zero(2, 2);
  cfg.initial_state = Vector(2);
  cfg.initial_state << 0.0, 1.0;  // ground state
  cfg.n_photons = 2;
  cfg.pulses = {GaussianPulse{omega1, t1}, GaussianPulse{omega2, t2}};
  cfg.t_final = t_final;
  cfg.dt = 1e-3;
  cfg.stride = 10;
  Observable pe;
  pe.label = "P_e";
  pe.X = Matrix::Zero(2, 2);
  pe.X(0, 0) = 1.0;
  cfg.observables = {pe};
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path);
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  return assemble(tokenize(text, origin), origin);
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  if (!cfg.preset.empty()) os << "preset = " << cfg.preset << "\n";
  os << "system.dim = " << cfg.dim << "\n";
  auto emit_matrix = [&os](const char* key, const Matrix& m) {
    os << key << " =";
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) os << " " << fmt17(m(r, c));
    os << "\n";
  };
  emit_matrix("system.S", cfg.S);
  emit_matrix("system.L", cfg.L);
  emit_matrix("system.H", cfg.H);
  os << "system.initial_state =";
  for (int i = 0; i < cfg.initial_state.size(); ++i) os << " " << fmt17(cfg.initial_state(i));
  os << "\n";
  os << "field.n = " << cfg.n_photons << "\n";
  for (std::size_t i = 0; i < cfg.pulses.size(); ++i) {
    os << "field.pulse." << i + 1 << " = ";
    if (const auto* g = std::get_if<GaussianPulse>(&cfg.pulses[i]))
      os << "gaussian " << fmt17(g->omega) << " " << fmt17(g->center);
    else
      os << "file " << std::get<TabulatedPulse>(cfg.pulses[i]).path;
    os << "\n";
  }
  os << "time.t_final = " << fmt17(cfg.t_final) << "\n";
  os << "time.dt = " << fmt17(cfg.dt) << "\n";
  os << "time.stride = " << cfg.stride << "\n";
  os << "detection.mode = "
     << (cfg.detection == Detection::homodyne ? "homodyne" : "photocount") << "\n";
  os << "detection.seed = " << cfg.seed << "\n";
  os << "detection.N = " << cfg.N << "\n";
  os << "detection.renormalize = " << (cfg.renormalize ? "true" : "false") << "\n";
  os << "detection.threads = " << cfg.threads << "\n";
  for (std::size_t i = 0; i < cfg.observables.size(); ++i) {
    os << "observable." << i + 1 << ".label = " << cfg.observables[i].label << "\n";
    emit_matrix(("observable." + std::to_string(i + 1) + ".matrix").c_str(),
                cfg.observables[i].X);
  }
  return os.str();
}

SystemModel build_model(const RunConfig& cfg) {
  return make_system(cfg.S, cfg.L, cfg.H, cfg.initial_state);
}

PulseSet build_pulses(const RunConfig& cfg) {
  return PulseSet::make(cfg.pulses, cfg.t_final, cfg.dt);
}

}  // namespace pf
