#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "stratlab/fft.hpp"
#include "stratlab/grid.hpp"

namespace stratlab {

enum class CorrelationKind { gaussian, sech };

inline const char* to_string(CorrelationKind k) {
  return k == CorrelationKind::gaussian ? "gaussian" : "sech";
}

inline CorrelationKind correlation_kind_from_string(const std::string& s) {
  if (s == "gaussian") return CorrelationKind::gaussian;
  if (s == "sech") return CorrelationKind::sech;
  throw contract_error("unknown correlation kind: " + s);
}

// Stationary correlation R with closed-form nonnegative spectrum. The plain
// convention F[R](xi) = int R(x) e^{-i xi x} dx is used throughout, so
// sigma^2 = F[R](0) = int R dx and rho_hat = sqrt(F[R]) integrates to sigma.
struct CorrelationModel {
  CorrelationKind kind = CorrelationKind::gaussian;
  double length_scale = 1.0;  // l
  double amplitude = 1.0;     // R(0)

  void validate() const {
    if (!(length_scale > 0.0))
      throw contract_error("CorrelationModel: length_scale must be positive");
    if (!(amplitude > 0.0))
      throw contract_error("CorrelationModel: amplitude must be positive");
  }

  // R(x) = E{q(0) q(x)}.
  double correlation(std::span<const double> x) const {
    double l = length_scale;
    if (kind == CorrelationKind::gaussian) {
      double r2 = 0.0;
      for (double c : x) r2 += c * c;
      return amplitude * std::exp(-r2 / (2.0 * l * l));
    }
    double p = amplitude;
    for (double c : x) p /= std::cosh(c / l);
    return p;
  }

  // F[R](xi) >= 0 (Bochner), factorized over axes.
  double power_spectrum(std::span<const double> xi) const {
    double l = length_scale;
    if (kind == CorrelationKind::gaussian) {
      double r2 = 0.0;
      for (double c : xi) r2 += c * c;
      double per_axis = std::sqrt(2.0 * std::numbers::pi) * l;
      return amplitude * std::pow(per_axis, static_cast<double>(xi.size())) *
             std::exp(-l * l * r2 / 2.0);
    }
    double p = amplitude;
    for (double c : xi) {
      p *= std::numbers::pi * l / std::cosh(std::numbers::pi * l * c / 2.0);
    }
    return p;
  }

  double sqrt_spectrum(std::span<const double> xi) const {
    return std::sqrt(power_spectrum(xi));
  }

  // sigma = sqrt(int R dx), closed form per kind.
  double sigma(int dim) const {
    double l = length_scale;
    if (kind == CorrelationKind::gaussian)
      return std::sqrt(amplitude) *
             std::pow(2.0 * std::numbers::pi * l * l, 0.25 * dim);
    return std::sqrt(amplitude) * std::pow(std::numbers::pi * l, 0.5 * dim);
  }
};

inline double sigma(const CorrelationModel& model, int dim) {
  model.validate();
  return model.sigma(dim);
}

// rho on the grid via inverse transform of sqrt(F[R]) on the frequency
// lattice; satisfies rho (*) rho = R on-grid. Rejects under-resolved l.
inline Field rho_kernel(const CorrelationModel& model, const GridSpec& grid) {
  model.validate();
  double h = grid.spacing();
  if (!(model.length_scale >= 4.0 * h))
    throw contract_error("rho_kernel: length_scale must be >= 4 h, got l/h = " +
                         std::to_string(model.length_scale / h));
  cvector spec(grid.size());
  std::vector<int> idx(grid.dim);
  std::vector<double> xi(grid.dim);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    grid.unflatten(i, idx);
    for (int a = 0; a < grid.dim; ++a) xi[a] = grid.angular_frequency(idx[a]);
    spec[i] = model.sqrt_spectrum(xi);
  }
  return field_from_spectrum(grid, spec);
}

}  // namespace stratlab
