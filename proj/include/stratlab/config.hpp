#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "stratlab/correlation.hpp"
#include "stratlab/errors.hpp"
#include "stratlab/solver.hpp"

namespace stratlab {

// Flat key = value file; '#' starts a comment, blank lines ignored.
inline std::map<std::string, std::string> parse_kv_text(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  auto trim = [](std::string s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw contract_error("config line " + std::to_string(lineno) +
                           ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

inline std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw contract_error("cannot open config file: " + path);
  return parse_kv_text(in);
}

namespace detail {

inline double kv_double(const std::map<std::string, std::string>& kv,
                        const std::string& key, double fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw contract_error("config key '" + key + "': not a number: " + it->second);
  }
}

inline int kv_int(const std::map<std::string, std::string>& kv, const std::string& key,
                  int fallback) {
  double v = kv_double(kv, key, fallback);
  int i = static_cast<int>(v);
  if (i != v) throw contract_error("config key '" + key + "': not an integer");
  return i;
}

inline std::string kv_string(const std::map<std::string, std::string>& kv,
                             const std::string& key, const std::string& fallback) {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

}  // namespace detail

// SimConfig from a flat key-value map. Keys (all optional, defaults shown):
//   d=1 L=40 N=512 m=2 T=0.5 dt=0.00390625 scheme=splitting
//   u0_kind=gaussian_bump u0_width=0 (0 -> L/40)
//   model_kind=gaussian model_length=10 model_amplitude=0 (0 -> sigma = 1)
//   save_stride=1 duhamel_terms=10 duhamel_nodes_per_unit=128
inline SimConfig sim_config_from_kv(const std::map<std::string, std::string>& kv) {
  SimConfig c;
  int d = detail::kv_int(kv, "d", 1);
  double L = detail::kv_double(kv, "L", 40.0);
  int N = detail::kv_int(kv, "N", 512);
  c.grid = GridSpec::make(d, L, N);
  c.order = detail::kv_int(kv, "m", 2);
  c.horizon = detail::kv_double(kv, "T", 0.5);
  c.dt = detail::kv_double(kv, "dt", 1.0 / 256.0);
  c.scheme = scheme_from_string(detail::kv_string(kv, "scheme", "splitting"));
  c.u0.kind = InitialCondition::kind_from_string(
      detail::kv_string(kv, "u0_kind", "gaussian_bump"));
  c.u0.width = detail::kv_double(kv, "u0_width", 0.0);
  c.model.kind = correlation_kind_from_string(
      detail::kv_string(kv, "model_kind", "gaussian"));
  c.model.length_scale = detail::kv_double(kv, "model_length", 10.0);
  double amp = detail::kv_double(kv, "model_amplitude", 0.0);
  if (amp <= 0.0) {
    // normalize so sigma = 1
    c.model.amplitude = 1.0;
    double s = c.model.sigma(d);
    c.model.amplitude = 1.0 / (s * s);
  } else {
    c.model.amplitude = amp;
  }
  c.save_stride = detail::kv_int(kv, "save_stride", 1);
  c.duhamel_terms = detail::kv_int(kv, "duhamel_terms", 10);
  c.duhamel_nodes_per_unit = detail::kv_int(kv, "duhamel_nodes_per_unit", 128);
  c.validate();
  return c;
}

inline std::string sim_config_to_string(const SimConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "d=" << c.grid.dim << "\nL=" << c.grid.side << "\nN=" << c.grid.n_points
     << "\nm=" << c.order << "\nT=" << c.horizon << "\ndt=" << c.dt
     << "\nscheme=" << to_string(c.scheme)
     << "\nu0_kind=" << InitialCondition::to_string(c.u0.kind)
     << "\nu0_width=" << c.u0.width << "\nmodel_kind=" << to_string(c.model.kind)
     << "\nmodel_length=" << c.model.length_scale
     << "\nmodel_amplitude=" << c.model.amplitude
     << "\nsave_stride=" << c.save_stride << "\nduhamel_terms=" << c.duhamel_terms
     << "\nduhamel_nodes_per_unit=" << c.duhamel_nodes_per_unit << "\n";
  return os.str();
}

}  // namespace stratlab
