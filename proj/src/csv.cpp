#include "photonfilter/csv.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pf {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

}  // namespace

void write_snapshot_csv(const std::string& path, const MasterSeries& series, const Matrix& X) {
  std::ofstream out = open_out(path);
  out << "t,pair_id_l,pair_id_r,re_tr,im_tr,re_exp_X,im_exp_X\n";
  for (std::size_t s = 0; s < series.times.size(); ++s) {
    const DensityHierarchy& h = series.snapshots[s];
    const int m = h.subset_count();
    for (int a = 0; a < m; ++a) {
      for (int b = a; b < m; ++b) {
        const Matrix& rho = h.comp(h.pair_index(a, b));
        const Complex tr = rho.trace();
        const Complex ex = (rho.adjoint() * X).trace();
        out << fmt17(series.times[s]) << "," << a + 1 << "," << b + 1 << "," << fmt17(tr.real())
            << "," << fmt17(tr.imag()) << "," << fmt17(ex.real()) << "," << fmt17(ex.imag())
            << "\n";
      }
    }
  }
}

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec) {
  std::ofstream out = open_out(path);
  out << "t,dY";
  for (const auto& label : rec.labels) out << "," << label;
  out << ",trace_drift\n";
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    out << fmt17(rec.times[i]) << ",";
    if (i > 0) out << fmt17(rec.dY[i - 1]);
    for (const auto& series : rec.conditional) out << "," << fmt17(series[i]);
    out << "," << fmt17(rec.trace_drift[i]) << "\n";
  }
}

void write_jump_csv(const std::string& path, const JumpRecord& rec) {
  std::ofstream out = open_out(path);
  out << "t,n_cum";
  for (const auto& label : rec.labels) out << "," << label;
  out << ",trace_drift\n";
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    out << fmt17(rec.times[i]) << "," << rec.counts[i];
    for (const auto& series : rec.conditional) out << "," << fmt17(series[i]);
    out << "," << fmt17(rec.trace_drift[i]) << "\n";
  }
}

void write_jump_times(const std::string& path, const JumpRecord& rec) {
  std::ofstream out = open_out(path);
  for (double t : rec.jump_times) out << fmt17(t) << "\n";
}

void write_summary_csv(const std::string& path, const EnsembleSummary& s) {
  std::ofstream out = open_out(path);
  out << "t";
  for (const auto& label : s.labels)
    out << ",mean_" << label << ",stderr_" << label << ",master_" << label;
  out << "\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    out << fmt17(s.times[i]);
    for (std::size_t o = 0; o < s.labels.size(); ++o)
      out << "," << fmt17(s.mean[o][i]) << "," << fmt17(s.stderr_[o][i]) << ","
          << fmt17(s.master[o][i]);
    out << "\n";
  }
}

void write_metadata_sidecar(const std::string& path, const RunConfig& cfg,
                            const EnsembleSummary* summary) {
  std::ofstream out = open_out(path);
  out << serialize_config(cfg);
  if (summary) {
    out << "# requested_N: " << summary->requested_N << "\n";
    out << "# failures: " << summary->failures << "\n";
    out << "# wall_seconds: " << fmt17(summary->wall_seconds) << "\n";
    for (std::size_t o = 0; o < summary->labels.size(); ++o)
      out << "# sup_norm_" << summary->labels[o] << ": " << fmt17(summary->sup_norm_obs[o])
          << "\n";
    if (summary->mean_total_counts > 0.0)
      out << "# mean_total_counts: " << fmt17(summary->mean_total_counts) << "\n";
  }
}

std::vector<double> read_value_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
  std::vector<double> out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::size_t a = 0, b = raw.size();
    while (a < b && std::isspace(static_cast<unsigned char>(raw[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(raw[b - 1]))) --b;
    if (a == b) continue;
    try {
      std::size_t used = 0;
      const std::string token = raw.substr(a, b - a);
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      std::ostringstream os;
      os << path << ":" << line << ": cannot parse value '" << raw.substr(a, b - a) << "'";
      throw std::invalid_argument(os.str());
    }
  }
  return out;
}

}  // namespace pf
