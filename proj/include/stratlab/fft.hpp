#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "stratlab/grid.hpp"

namespace stratlab {

using cvector = std::vector<std::complex<double>>;

namespace detail {

// FFTW planning is not thread-safe; plans are cached once under a mutex and
// executed concurrently via the new-array interface (FFTW_UNALIGNED so any
// caller buffer is admissible).
inline fftw_plan plan_for(const std::vector<int>& dims, int sign) {
  static std::mutex mu;
  static std::map<std::pair<std::vector<int>, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dims, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  cvector a(n), b(n);
  fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                              reinterpret_cast<fftw_complex*>(a.data()),
                              reinterpret_cast<fftw_complex*>(b.data()), sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(std::move(key), p);
  return p;
}

inline void dft(const GridSpec& grid, const cvector& in, cvector& out, int sign) {
  std::vector<int> dims(static_cast<std::size_t>(grid.dim), grid.n_points);
  fftw_plan p = plan_for(dims, sign);
  out.resize(in.size());
  fftw_execute_dft(p,
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace detail

// Forward transform in the plain convention: spectrum(f)[k] approximates
// \int f(x) e^{-i xi_k . x} dx with xi_k = 2 pi k / L, i.e. h^d * DFT.
inline cvector spectrum(const Field& f) {
  cvector in(f.values.begin(), f.values.end());
  cvector out;
  detail::dft(f.grid, in, out, FFTW_FORWARD);
  double hd = f.grid.cell_volume();
  for (auto& z : out) z *= hd;
  return out;
}

inline cvector spectrum_of_complex(const GridSpec& grid, const cvector& v) {
  cvector out;
  detail::dft(grid, v, out, FFTW_FORWARD);
  double hd = grid.cell_volume();
  for (auto& z : out) z *= hd;
  return out;
}

// Inverse of spectrum(): f(x_j) = (1/L^d) sum_k F_k e^{+i xi_k . x_j}.
// Takes the real part; for Hermitian spectra the imaginary residue is roundoff.
inline Field field_from_spectrum(const GridSpec& grid, const cvector& spec) {
  cvector out;
  detail::dft(grid, spec, out, FFTW_BACKWARD);
  Field f(grid);
  double scale = 1.0 / std::pow(grid.side, grid.dim);
  for (std::size_t i = 0; i < out.size(); ++i) f.values[i] = out[i].real() * scale;
  return f;
}

}  // namespace stratlab
