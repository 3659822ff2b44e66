#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stratlab/convergence.hpp"
#include "stratlab/errors.hpp"
#include "stratlab/green_kernel.hpp"
#include "stratlab/solver.hpp"

namespace stratlab {

using json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";

inline std::string fnv1a_digest(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline json to_json(const KernelBoundsReport& r) {
  return json{{"schema_version", kReportSchemaVersion},
              {"m", r.m},
              {"d", r.grid.dim},
              {"L", r.grid.side},
              {"N", r.grid.n_points},
              {"l1_sup", r.l1_sup},
              {"l2_scaled_sup", r.l2_scaled_sup},
              {"linf_scaled_sup", r.linf_scaled_sup},
              {"times", r.times_probed}};
}

inline json to_json(const MepsResult& r, double eps) {
  return json{{"eps", eps},
              {"value", r.value},
              {"argmax_time", r.argmax_time},
              {"mesh_too_coarse", r.mesh_too_coarse},
              {"times", r.times},
              {"mesh_values", r.mesh_values}};
}

inline json to_json(const ConvergenceReport& r) {
  return json{{"schema_version", kReportSchemaVersion},
              {"eps_values", r.eps_values},
              {"mse", r.mse},
              {"stderr", r.std_errors},
              {"mse_mid", r.mse_mid},
              {"fitted_slope", r.fitted_slope},
              {"slope_ci", json::array({r.slope_ci_low, r.slope_ci_high})},
              {"n_realizations", r.n_realizations},
              {"master_seed", r.master_seed},
              {"conclusive", r.conclusive},
              {"monotone_within_2se", r.monotone_within_2se},
              {"coupling_ratio", r.coupling_ratio},
              {"bias_sentinel", r.bias_sentinel},
              {"config_digest", r.config_digest}};
}

struct RunManifest {
  std::string subcommand;
  std::string config_digest;
  std::uint64_t master_seed = 0;
  std::string version = kVersion;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> outputs;
};

inline json to_json(const RunManifest& m) {
  return json{{"subcommand", m.subcommand}, {"config_digest", m.config_digest},
              {"master_seed", m.master_seed}, {"version", m.version},
              {"wall_clock_seconds", m.wall_clock_seconds}, {"outputs", m.outputs}};
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw numeric_error("cannot write file: " + path);
  out << content;
}

inline void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

inline void write_samples_csv(const std::string& path, const ConvergenceReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "realization_index,eps,squared_error\n";
  for (std::size_t e = 0; e < r.eps_values.size(); ++e)
    for (std::size_t i = 0; i < r.samples[e].size(); ++i)
      os << i << "," << r.eps_values[e] << "," << r.samples[e][i] << "\n";
  write_text_file(path, os.str());
}

inline void write_field_csv(const std::string& path, const Field& f) {
  std::ostringstream os;
  os.precision(17);
  os << "cell,value\n";
  for (std::size_t i = 0; i < f.values.size(); ++i) os << i << "," << f.values[i] << "\n";
  write_text_file(path, os.str());
}

inline void write_trajectory_csv(const std::string& path, const Trajectory& t) {
  std::ostringstream os;
  os.precision(17);
  os << "time,cell,value\n";
  for (std::size_t s = 0; s < t.states.size(); ++s)
    for (std::size_t i = 0; i < t.states[s].values.size(); ++i)
      os << t.times[s] << "," << i << "," << t.states[s].values[i] << "\n";
  write_text_file(path, os.str());
}

}  // namespace stratlab
