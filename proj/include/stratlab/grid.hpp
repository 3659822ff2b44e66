#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "stratlab/errors.hpp"

namespace stratlab {

// Periodic box of side L in d dimensions, N points per axis. Index 0 sits at
// the origin; indices above N/2 wrap to negative coordinates (FFT layout).
struct GridSpec {
  int dim = 1;
  double side = 1.0;
  int n_points = 2;

  static GridSpec make(int dim, double side, int n_points) {
    if (dim < 1) throw contract_error("GridSpec: dim must be >= 1");
    if (!(side > 0.0)) throw contract_error("GridSpec: side must be positive");
    if (n_points < 2 || (n_points & (n_points - 1)) != 0)
      throw contract_error("GridSpec: n_points must be a power of two >= 2");
    return GridSpec{dim, side, n_points};
  }

  double spacing() const { return side / n_points; }
  double cell_volume() const { return std::pow(spacing(), dim); }

  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(n_points);
    return s;
  }

  // Axis coordinate of a per-axis index, wrapped to [-L/2, L/2).
  double coordinate(int k) const {
    return (k < n_points / 2 ? k : k - n_points) * spacing();
  }

  // Angular frequency 2*pi*k/L of a per-axis index, wrapped to negative modes.
  double angular_frequency(int k) const {
    int signed_k = k < n_points / 2 ? k : k - n_points;
    return 2.0 * std::numbers::pi * signed_k / side;
  }

  void unflatten(std::size_t flat, std::span<int> out) const {
    for (int a = dim - 1; a >= 0; --a) {
      out[a] = static_cast<int>(flat % n_points);
      flat /= n_points;
    }
  }

  std::size_t flatten(std::span<const int> idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim; ++a) {
      int k = idx[a] % n_points;
      if (k < 0) k += n_points;
      flat = flat * n_points + static_cast<std::size_t>(k);
    }
    return flat;
  }

  // Squared integer mode number sum_k k_i^2 (wrapped); exactly symmetric under
  // axis permutations and sign flips, so derived symbols are radially
  // symmetric on the lattice bit-for-bit.
  std::int64_t mode_norm_sq(std::size_t flat) const {
    std::int64_t s = 0;
    for (int a = 0; a < dim; ++a) {
      int k = static_cast<int>(flat % n_points);
      flat /= n_points;
      if (k >= n_points / 2) k -= n_points;
      s += static_cast<std::int64_t>(k) * k;
    }
    return s;
  }

  // Euclidean distance from the origin of the cell with given flat index.
  double radius(std::size_t flat) const {
    double s = 0;
    for (int a = dim - 1; a >= 0; --a) {
      int k = static_cast<int>(flat % n_points);
      flat /= n_points;
      double x = coordinate(k);
      s += x * x;
    }
    return std::sqrt(s);
  }

  bool operator==(const GridSpec&) const = default;
};

// Real scalar field sampled on a grid.
struct Field {
  GridSpec grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const GridSpec& g, double fill = 0.0)
      : grid(g), values(g.size(), fill) {}
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
  if (!(a == b)) throw contract_error(std::string(where) + ": grid mismatch");
}

inline double integral(const Field& f) {
  double s = 0;
  for (double v : f.values) s += v;
  return s * f.grid.cell_volume();
}

inline double l1_norm(const Field& f) {
  double s = 0;
  for (double v : f.values) s += std::abs(v);
  return s * f.grid.cell_volume();
}

inline double l2_norm_sq(const Field& f) {
  double s = 0;
  for (double v : f.values) s += v * v;
  return s * f.grid.cell_volume();
}

inline double l2_norm(const Field& f) { return std::sqrt(l2_norm_sq(f)); }

inline double linf_norm(const Field& f) {
  double s = 0;
  for (double v : f.values) s = std::max(s, std::abs(v));
  return s;
}

inline double mean(const Field& f) {
  double s = 0;
  for (double v : f.values) s += v;
  return s / static_cast<double>(f.values.size());
}

inline double l2_distance(const Field& a, const Field& b) {
  require_same_grid(a.grid, b.grid, "l2_distance");
  double s = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return std::sqrt(s * a.grid.cell_volume());
}

inline bool all_finite(const Field& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace stratlab
