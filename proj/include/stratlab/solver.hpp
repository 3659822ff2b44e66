#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "stratlab/correlation.hpp"
#include "stratlab/fft.hpp"
#include "stratlab/green_kernel.hpp"
#include "stratlab/grid.hpp"
#include "stratlab/potential.hpp"

namespace stratlab {

enum class Scheme { splitting, duhamel };

inline const char* to_string(Scheme s) {
  return s == Scheme::splitting ? "splitting" : "duhamel";
}

inline Scheme scheme_from_string(const std::string& s) {
  if (s == "splitting") return Scheme::splitting;
  if (s == "duhamel") return Scheme::duhamel;
  throw contract_error("unknown scheme: " + s);
}

struct InitialCondition {
  enum class Kind { gaussian_bump, indicator, point_mass };
  Kind kind = Kind::gaussian_bump;
  double width = 0.0;  // 0 = default L/40

  static Kind kind_from_string(const std::string& s) {
    if (s == "gaussian_bump") return Kind::gaussian_bump;
    if (s == "indicator") return Kind::indicator;
    if (s == "point_mass") return Kind::point_mass;
    throw contract_error("unknown initial condition kind: " + s);
  }
  static const char* to_string(Kind k) {
    switch (k) {
      case Kind::gaussian_bump: return "gaussian_bump";
      case Kind::indicator: return "indicator";
      default: return "point_mass";
    }
  }
};

// Unit-mass initial data centered at the origin.
inline Field initial_field(const GridSpec& grid, const InitialCondition& ic) {
  Field u(grid);
  double w = ic.width > 0.0 ? ic.width : grid.side / 40.0;
  switch (ic.kind) {
    case InitialCondition::Kind::gaussian_bump: {
      double norm = std::pow(2.0 * std::numbers::pi * w * w, -0.5 * grid.dim);
      for (std::size_t i = 0; i < u.values.size(); ++i) {
        double r = grid.radius(i);
        u.values[i] = norm * std::exp(-r * r / (2.0 * w * w));
      }
      break;
    }
    case InitialCondition::Kind::indicator: {
      std::vector<int> idx(grid.dim);
      std::size_t count = 0;
      for (std::size_t i = 0; i < u.values.size(); ++i) {
        grid.unflatten(i, idx);
        bool inside = true;
        for (int a = 0; a < grid.dim; ++a)
          inside = inside && std::abs(grid.coordinate(idx[a])) <= w;
        if (inside) {
          u.values[i] = 1.0;
          ++count;
        }
      }
      if (count == 0) throw contract_error("initial_field: indicator too narrow for grid");
      double scale = 1.0 / (static_cast<double>(count) * grid.cell_volume());
      for (double& v : u.values) v *= scale;
      break;
    }
    case InitialCondition::Kind::point_mass:
      u.values[0] = 1.0 / grid.cell_volume();
      break;
  }
  return u;
}

struct SimConfig {
  GridSpec grid;
  int order = 2;       // m
  double horizon = 0.5;  // T
  double dt = 1.0 / 256.0;
  InitialCondition u0;
  CorrelationModel model;
  Scheme scheme = Scheme::splitting;
  int save_stride = 1;
  int duhamel_terms = 10;
  int duhamel_nodes_per_unit = 128;

  void validate() const {
    require_admissible_order(order, grid);
    if (!(horizon > 0.0)) throw contract_error("SimConfig: horizon must be positive");
    if (!(dt > 0.0) || dt > horizon)
      throw contract_error("SimConfig: need 0 < dt <= horizon");
    if (save_stride < 1) throw contract_error("SimConfig: save_stride must be >= 1");
    model.validate();
  }

  int n_steps() const {
    return std::max(1, static_cast<int>(std::ceil(horizon / dt - 1e-9)));
  }
  double dt_effective() const { return horizon / n_steps(); }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> states;
  std::string potential_ref;
};

// Strang splitting for d_t u + (-Lap)^{m/2} u = V u with a static potential:
// half-step pointwise exp(dt V / 2), exact spectral semigroup step, half-step
// again. Exact for V = 0 and for constant V; second order otherwise.
inline Trajectory solve_with_potential(const SimConfig& config, const PotentialField& V) {
  config.validate();
  require_same_grid(config.grid, V.field.grid, "solve_with_potential");
  double vmax = linf_norm(V.field);
  double dt = config.dt_effective();
  if (dt * vmax > 0.5) {
    std::ostringstream os;
    os << "solve_with_potential: stability guard dt*max|V| = " << dt * vmax
       << " > 0.5; reduce dt below " << 0.5 / vmax;
    throw contract_error(os.str());
  }
  int steps = config.n_steps();
  GreenKernel kernel = build_kernel(config.order, config.grid, dt);
  std::vector<double> half(V.field.values.size());
  for (std::size_t i = 0; i < half.size(); ++i)
    half[i] = std::exp(0.5 * dt * V.field.values[i]);

  Field u = initial_field(config.grid, config.u0);
  Trajectory traj;
  traj.potential_ref = V.provenance;
  traj.times.push_back(0.0);
  traj.states.push_back(u);
  for (int s = 1; s <= steps; ++s) {
    for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] *= half[i];
    u = semigroup_apply(kernel, u);
    for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] *= half[i];
    if (!all_finite(u)) {
      std::ostringstream os;
      os << "solve_with_potential: non-finite state at t = " << s * dt
         << "; last valid time = " << (s - 1) * dt;
      throw numeric_error(os.str());
    }
    if (s % config.save_stride == 0 || s == steps) {
      traj.times.push_back(s * dt);
      traj.states.push_back(u);
    }
  }
  return traj;
}

namespace detail {

// Symbols for the composite-midpoint time convolution on a uniform mesh of
// width delta: mid[j] = exp(-(j+1/2) delta |xi|^m) for the interior cells and
// tail = int_0^delta exp(-tau |xi|^m) dtau, the exact integral over the cell
// adjacent to the singular endpoint.
struct ConvolutionSymbols {
  std::vector<std::vector<double>> mid;
  std::vector<double> tail;
};

inline ConvolutionSymbols make_convolution_symbols(const GridSpec& grid, int m,
                                                   double delta, int n_cells) {
  ConvolutionSymbols sym;
  sym.mid.reserve(n_cells);
  for (int j = 0; j < n_cells; ++j)
    sym.mid.push_back(build_kernel(m, grid, (j + 0.5) * delta).symbol);
  sym.tail.resize(grid.size());
  double base = 2.0 * std::numbers::pi / grid.side;
  double base_sq = base * base;
  int half = m / 2;
  for (std::size_t i = 0; i < sym.tail.size(); ++i) {
    double xi_sq = base_sq * static_cast<double>(grid.mode_norm_sq(i));
    double p = 1.0;
    for (int j = 0; j < half; ++j) p *= xi_sq;
    sym.tail[i] = p == 0.0 ? delta : -std::expm1(-delta * p) / p;
  }
  return sym;
}

// int_0^{tau_k} G(tau_k - s) [V u(s)] ds for every node k, from states on the
// uniform mesh tau_k = k delta. Midpoint values are endpoint averages; the
// cell touching s = tau_k uses the exact kernel integral.
inline std::vector<Field> time_convolution_all(const std::vector<Field>& states,
                                               const Field& V, int m, double delta) {
  const GridSpec& grid = V.grid;
  int K = static_cast<int>(states.size()) - 1;
  ConvolutionSymbols sym = make_convolution_symbols(grid, m, delta, K);
  // spectra of V * (u(tau_i) + u(tau_{i+1}))/2
  std::vector<cvector> w_spec(K);
  Field scratch(grid);
  for (int i = 0; i < K; ++i) {
    for (std::size_t c = 0; c < scratch.values.size(); ++c)
      scratch.values[c] = 0.5 * V.values[c] *
                          (states[i].values[c] + states[i + 1].values[c]);
    w_spec[i] = spectrum(scratch);
  }
  std::vector<Field> out(K + 1);
  out[0] = Field(grid);
  cvector acc(grid.size());
  for (int k = 1; k <= K; ++k) {
    std::fill(acc.begin(), acc.end(), std::complex<double>(0.0));
    for (int i = 0; i + 1 < k; ++i) {
      const auto& s = sym.mid[k - i - 1];
      const auto& w = w_spec[i];
      for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += delta * s[c] * w[c];
    }
    const auto& w_last = w_spec[k - 1];
    for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += sym.tail[c] * w_last[c];
    out[k] = field_from_spectrum(grid, acc);
  }
  return out;
}

}  // namespace detail

struct DuhamelResult {
  Trajectory trajectory;             // partial sum at the quadrature nodes
  std::vector<double> term_norms;    // ||u_n(T)||_{L2(grid)}, n = 0..n_terms
  bool divergence_warning = false;   // 3 consecutive non-decreasing term norms
};

// Truncated Duhamel iteration u_{n+1} = H_V u_n, u_0 = ballistic flow of the
// initial data, with the time convolution quadrature above.
inline DuhamelResult duhamel_iterate(const SimConfig& config, const PotentialField& V,
                                     int n_terms) {
  config.validate();
  require_same_grid(config.grid, V.field.grid, "duhamel_iterate");
  if (n_terms < 0 || n_terms > 12)
    throw contract_error("duhamel_iterate: n_terms cap is 12");
  if (config.duhamel_nodes_per_unit < 16)
    throw contract_error("duhamel_iterate: need >= 16 quadrature nodes per unit time");
  int K = std::max(2, static_cast<int>(std::ceil(config.horizon *
                                                 config.duhamel_nodes_per_unit)));
  double delta = config.horizon / K;

  // ballistic term at the nodes, stepped with the exact semigroup
  std::vector<Field> u_prev(K + 1);
  u_prev[0] = initial_field(config.grid, config.u0);
  GreenKernel step = build_kernel(config.order, config.grid, delta);
  for (int k = 1; k <= K; ++k) u_prev[k] = semigroup_apply(step, u_prev[k - 1]);

  std::vector<Field> partial = u_prev;
  DuhamelResult res;
  res.term_norms.push_back(l2_norm(u_prev[K]));
  int non_decreasing_run = 0;
  for (int n = 1; n <= n_terms; ++n) {
    std::vector<Field> u_next =
        detail::time_convolution_all(u_prev, V.field, config.order, delta);
    for (int k = 0; k <= K; ++k)
      for (std::size_t c = 0; c < partial[k].values.size(); ++c)
        partial[k].values[c] += u_next[k].values[c];
    double norm = l2_norm(u_next[K]);
    if (!std::isfinite(norm))
      throw numeric_error("duhamel_iterate: non-finite term norm at order " +
                          std::to_string(n));
    if (norm >= res.term_norms.back()) {
      if (++non_decreasing_run >= 2) res.divergence_warning = true;
    } else {
      non_decreasing_run = 0;
    }
    res.term_norms.push_back(norm);
    u_prev = std::move(u_next);
  }
  res.trajectory.potential_ref = V.provenance;
  res.trajectory.times.resize(K + 1);
  for (int k = 0; k <= K; ++k) res.trajectory.times[k] = k * delta;
  res.trajectory.states = std::move(partial);
  return res;
}

// Solve with the scheme the config selects.
inline Trajectory solve(const SimConfig& config, const PotentialField& V) {
  if (config.scheme == Scheme::splitting) return solve_with_potential(config, V);
  return duhamel_iterate(config, V, config.duhamel_terms).trajectory;
}

// Relative mild-solution residual
//   ||u(T) - e^{-T P} u0 - int_0^T G(T-s) [V u(s)] ds|| / ||u(T)||
// with the time integral quadratured over the trajectory's saved states.
inline double mild_residual(const Trajectory& traj, const PotentialField& V,
                            const SimConfig& config) {
  if (traj.states.size() < 33)
    throw contract_error("mild_residual: need >= 32 saved intervals");
  require_same_grid(config.grid, V.field.grid, "mild_residual");
  std::size_t M = traj.times.size();
  double delta = traj.times[1] - traj.times[0];
  for (std::size_t i = 1; i < M; ++i) {
    if (std::abs(traj.times[i] - traj.times[i - 1] - delta) > 1e-9 * delta)
      throw contract_error("mild_residual: saves must be uniformly spaced");
  }
  double T = traj.times.back();
  std::vector<Field> conv =
      detail::time_convolution_all(traj.states, V.field, config.order, delta);
  Field ballistic =
      semigroup_apply(build_kernel(config.order, config.grid, T), traj.states.front());
  const Field& uT = traj.states.back();
  Field residual(config.grid);
  for (std::size_t c = 0; c < residual.values.size(); ++c)
    residual.values[c] = uT.values[c] - ballistic.values[c] - conv.back().values[c];
  return l2_norm(residual) / l2_norm(uT);
}

}  // namespace stratlab
