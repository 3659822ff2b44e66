#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "stratlab/grid.hpp"
#include "stratlab/rng.hpp"

namespace stratlab {

// One realization of cell-wise Wiener increments: increments[j] ~ N(0, h^d),
// i.i.d., fully reproducible from (master_seed, realization_index).
struct WhiteNoiseField {
  GridSpec grid;
  std::vector<double> increments;
  std::uint64_t master_seed = 0;
  std::uint64_t realization_index = 0;
};

inline WhiteNoiseField sample_white_noise(const GridSpec& grid,
                                          std::uint64_t master_seed,
                                          std::uint64_t realization_index) {
  WhiteNoiseField w{grid, std::vector<double>(grid.size()), master_seed,
                    realization_index};
  NormalStream rng(master_seed, realization_index);
  double scale = std::sqrt(grid.cell_volume());
  for (double& v : w.increments) v = scale * rng.normal();
  return w;
}

}  // namespace stratlab
