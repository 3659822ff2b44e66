#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include "stratlab/correlation.hpp"
#include "stratlab/fft.hpp"
#include "stratlab/grid.hpp"
#include "stratlab/white_noise.hpp"

namespace stratlab {

// A realization of the random potential on the grid. eps = 0 marks the
// white-noise limit sigma * dW/h^d.
struct PotentialField {
  Field field;
  double eps = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t realization_index = 0;
  std::string provenance;
};

// q~_eps = rho_eps (*) dW with rho_eps = eps^{-d} rho(./eps), computed
// spectrally: the multiplier is rho_hat(eps * xi), which is exact on the
// lattice. Driving the same W as the limit SPDE realizes the path-wise
// coupling; in law this equals eps^{-d/2} q~(./eps).
inline PotentialField mollified_potential(const WhiteNoiseField& w,
                                          const CorrelationModel& model,
                                          double eps) {
  model.validate();
  const GridSpec& grid = w.grid;
  if (!(eps > 0.0)) throw contract_error("mollified_potential: eps must be positive");
  double width = eps * model.length_scale;  // physical scale of rho_eps
  double h = grid.spacing();
  if (width < 4.0 * h) {
    std::ostringstream os;
    os << "mollified_potential: oscillation scale eps*l = " << width
       << " under-resolved, need >= 4 h = " << 4.0 * h
       << " (ratio " << width / h << ")";
    throw contract_error(os.str());
  }
  if (width > grid.side / 8.0) {
    std::ostringstream os;
    os << "mollified_potential: oscillation scale eps*l = " << width
       << " too large for the box, need <= L/8 = " << grid.side / 8.0;
    throw contract_error(os.str());
  }

  Field density(grid);
  double inv_hd = 1.0 / grid.cell_volume();
  for (std::size_t i = 0; i < density.values.size(); ++i)
    density.values[i] = w.increments[i] * inv_hd;
  cvector spec = spectrum(density);
  std::vector<int> idx(grid.dim);
  std::vector<double> xi(grid.dim);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    grid.unflatten(i, idx);
    for (int a = 0; a < grid.dim; ++a)
      xi[a] = eps * grid.angular_frequency(idx[a]);
    spec[i] *= model.sqrt_spectrum(xi);
  }
  PotentialField q;
  q.field = field_from_spectrum(grid, spec);
  q.eps = eps;
  q.master_seed = w.master_seed;
  q.realization_index = w.realization_index;
  std::ostringstream os;
  os << "mollified(kind=" << to_string(model.kind) << ",l=" << model.length_scale
     << ",eps=" << eps << ",seed=" << w.master_seed << ",r=" << w.realization_index
     << ")";
  q.provenance = os.str();
  return q;
}

// The grid white noise sigma * dW_j / h^d, eps = 0.
inline PotentialField white_noise_potential(const WhiteNoiseField& w,
                                            const CorrelationModel& model) {
  model.validate();
  PotentialField q;
  q.field = Field(w.grid);
  double scale = model.sigma(w.grid.dim) / w.grid.cell_volume();
  for (std::size_t i = 0; i < q.field.values.size(); ++i)
    q.field.values[i] = scale * w.increments[i];
  q.eps = 0.0;
  q.master_seed = w.master_seed;
  q.realization_index = w.realization_index;
  std::ostringstream os;
  os << "white_noise(kind=" << to_string(model.kind) << ",seed=" << w.master_seed
     << ",r=" << w.realization_index << ")";
  q.provenance = os.str();
  return q;
}

}  // namespace stratlab
