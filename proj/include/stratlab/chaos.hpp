#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "stratlab/grid.hpp"
#include "stratlab/pairings.hpp"
#include "stratlab/white_noise.hpp"

namespace stratlab {

inline constexpr int kMaxChaosArity = 4;

// Key of a sparse n-variable grid function: flat cell indices, -1 padded.
using ChaosKey = std::array<std::int32_t, kMaxChaosArity>;

struct ChaosKeyHash {
  std::size_t operator()(const ChaosKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int32_t v : k) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

inline ChaosKey make_chaos_key(std::span<const std::int32_t> idx) {
  ChaosKey k;
  k.fill(-1);
  for (std::size_t i = 0; i < idx.size(); ++i) k[i] = idx[i];
  return k;
}

// Sparse function of `arity` grid cells. Entries are stored per ordered
// tuple; the symmetrized flag records whether symmetrize() produced it.
struct GridChaosFunction {
  int arity = 0;
  GridSpec grid;
  bool symmetrized = false;
  std::unordered_map<ChaosKey, double, ChaosKeyHash> values;

  GridChaosFunction() = default;
  GridChaosFunction(int a, const GridSpec& g) : arity(a), grid(g) {
    if (a < 0 || a > kMaxChaosArity)
      throw contract_error("GridChaosFunction: arity cap is 4");
  }

  static GridChaosFunction scalar(const GridSpec& g, double c) {
    GridChaosFunction f(0, g);
    f.symmetrized = true;
    if (c != 0.0) f.values.emplace(make_chaos_key({}), c);
    return f;
  }

  void add(std::initializer_list<std::int32_t> idx, double v) {
    if (static_cast<int>(idx.size()) != arity)
      throw contract_error("GridChaosFunction::add: tuple length != arity");
    std::vector<std::int32_t> tmp(idx);
    values[make_chaos_key(tmp)] += v;
  }

  double at(const ChaosKey& k) const {
    auto it = values.find(k);
    return it == values.end() ? 0.0 : it->second;
  }

  double scalar_value() const {
    return arity == 0 ? at(make_chaos_key({})) : 0.0;
  }
};

namespace detail {

inline std::vector<std::vector<int>> permutations_of(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace detail

// (1/n!) sum over permutations of the argument order.
inline GridChaosFunction symmetrize(const GridChaosFunction& f) {
  if (f.arity > kMaxChaosArity) throw contract_error("symmetrize: arity cap is 4");
  GridChaosFunction out(f.arity, f.grid);
  out.symmetrized = true;
  if (f.arity <= 1) {
    out.values = f.values;
    return out;
  }
  auto perms = detail::permutations_of(f.arity);
  double w = 1.0 / static_cast<double>(perms.size());
  ChaosKey pk;
  for (const auto& [key, val] : f.values) {
    for (const auto& perm : perms) {
      pk.fill(-1);
      for (int i = 0; i < f.arity; ++i) pk[i] = key[perm[i]];
      out.values[pk] += w * val;
    }
  }
  std::erase_if(out.values, [](const auto& kv) { return kv.second == 0.0; });
  return out;
}

inline bool is_symmetric(const GridChaosFunction& f, double rel_tol = 1e-12) {
  if (f.arity <= 1) return true;
  double scale = 0.0;
  for (const auto& [k, v] : f.values) scale = std::max(scale, std::abs(v));
  auto perms = detail::permutations_of(f.arity);
  ChaosKey pk;
  for (const auto& [key, val] : f.values) {
    for (const auto& perm : perms) {
      pk.fill(-1);
      for (int i = 0; i < f.arity; ++i) pk[i] = key[perm[i]];
      if (std::abs(f.at(pk) - val) > rel_tol * scale) return false;
    }
  }
  return true;
}

// Contraction of the last two slots: h^d sum_j f(..., j, j).
inline GridChaosFunction trace_once(const GridChaosFunction& f) {
  if (f.arity < 2) throw contract_error("trace_once: arity must be >= 2");
  GridChaosFunction out(f.arity - 2, f.grid);
  out.symmetrized = f.symmetrized;
  double hd = f.grid.cell_volume();
  ChaosKey pk;
  for (const auto& [key, val] : f.values) {
    if (key[f.arity - 2] != key[f.arity - 1]) continue;
    pk.fill(-1);
    for (int i = 0; i < f.arity - 2; ++i) pk[i] = key[i];
    out.values[pk] += hd * val;
  }
  std::erase_if(out.values, [](const auto& kv) { return kv.second == 0.0; });
  return out;
}

// Stratonovich norm ||f||_n: pairing sum of delta-contracted
// grid sums of |f (x) f|; each contracted pair carries one factor h^d.
inline double strat_norm(const GridChaosFunction& f) {
  if (f.arity > 3) throw contract_error("strat_norm: arity cap is 3");
  if (f.arity == 0) return std::abs(f.scalar_value());
  int n = f.arity;
  auto pairings = enumerate_pairings(2 * n);
  double hd = f.grid.cell_volume();
  double hd_pow_n = std::pow(hd, n);
  std::vector<std::pair<ChaosKey, double>> entries(f.values.begin(), f.values.end());
  double total = 0.0;
  std::array<std::int32_t, 2 * kMaxChaosArity> joint{};
  for (const auto& [ka, va] : entries) {
    for (const auto& [kb, vb] : entries) {
      for (int i = 0; i < n; ++i) {
        joint[i] = ka[i];
        joint[n + i] = kb[i];
      }
      double w = std::abs(va * vb) * hd_pow_n;
      for (const Pairing& p : pairings) {
        bool compatible = true;
        for (auto [k, l] : p.pairs) {
          if (joint[k] != joint[l]) {
            compatible = false;
            break;
          }
        }
        if (compatible) total += w;
      }
    }
  }
  return std::sqrt(total);
}

// Probabilists' Hermite polynomial He_r.
inline double hermite_he(int r, double x) {
  double h0 = 1.0;
  if (r == 0) return h0;
  double h1 = x;
  for (int k = 1; k < r; ++k) {
    double h2 = x * h1 - k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

// Iterated Stratonovich integral on the grid: the plain multilinear sum
// sum f(j_1..j_n) prod dW_{j_i}, diagonals included.
inline double discrete_strat_integral(const GridChaosFunction& f,
                                      const WhiteNoiseField& w) {
  require_same_grid(f.grid, w.grid, "discrete_strat_integral");
  if (f.arity > kMaxChaosArity)
    throw contract_error("discrete_strat_integral: arity cap is 4");
  double total = 0.0;
  for (const auto& [key, val] : f.values) {
    double term = val;
    for (int i = 0; i < f.arity; ++i) term *= w.increments[key[i]];
    total += term;
  }
  return total;
}

// Iterated Ito (Skorohod) integral on the grid: Wick-renormalized sum where a
// cell repeated r times contributes h^{rd/2} He_r(dW_j / h^{d/2}).
inline double discrete_ito_integral(const GridChaosFunction& g,
                                    const WhiteNoiseField& w) {
  require_same_grid(g.grid, w.grid, "discrete_ito_integral");
  if (g.arity > kMaxChaosArity)
    throw contract_error("discrete_ito_integral: arity cap is 4");
  if (!is_symmetric(g))
    throw contract_error("discrete_ito_integral: integrand must be symmetric");
  double sqrt_hd = std::sqrt(g.grid.cell_volume());
  double total = 0.0;
  std::array<std::int32_t, kMaxChaosArity> cells{};
  std::array<int, kMaxChaosArity> mult{};
  for (const auto& [key, val] : g.values) {
    int distinct = 0;
    for (int i = 0; i < g.arity; ++i) {
      std::int32_t c = key[i];
      int j = 0;
      while (j < distinct && cells[j] != c) ++j;
      if (j == distinct) {
        cells[distinct] = c;
        mult[distinct++] = 1;
      } else {
        ++mult[j];
      }
    }
    double term = val;
    for (int j = 0; j < distinct; ++j) {
      double z = w.increments[cells[j]] / sqrt_hd;
      term *= std::pow(sqrt_hd, mult[j]) * hermite_he(mult[j], z);
    }
    total += term;
  }
  return total;
}

inline double hu_meyer_weight(int n, int k) {
  // n! / ((n-2k)! k! 2^k), exact in small integers
  double w = 1.0;
  for (int j = n - 2 * k + 1; j <= n; ++j) w *= j;
  for (int j = 2; j <= k; ++j) w /= j;
  for (int j = 0; j < k; ++j) w /= 2.0;
  return w;
}

// Hu-Meyer expansion of a symmetric f: the k-th output (arity n-2k) already
// carries its weight, so I_n(f) = sum_k Ito_{n-2k}(output[k]) holds
// realization-wise as an exact grid identity.
inline std::vector<GridChaosFunction> hu_meyer_strat_to_ito(const GridChaosFunction& f) {
  if (f.arity > kMaxChaosArity) throw contract_error("hu_meyer: arity cap is 4");
  if (!is_symmetric(f)) throw contract_error("hu_meyer: integrand must be symmetric");
  std::vector<GridChaosFunction> out;
  GridChaosFunction current = f;
  for (int k = 0; 2 * k <= f.arity; ++k) {
    GridChaosFunction term = current;
    double w = hu_meyer_weight(f.arity, k);
    for (auto& [key, val] : term.values) val *= w;
    out.push_back(std::move(term));
    if (2 * (k + 1) <= f.arity) current = trace_once(current);
  }
  return out;
}

// Chaos coefficients g_m of the formal sum of Stratonovich integrals with
// coefficients f_seq[n] (indexed by arity, missing entries allowed):
// g_m = sum_k (m+2k)!/(m! k! 2^k) trace^k f_{m+2k}.
inline std::vector<GridChaosFunction> ito_to_strat_coefficients(
    const std::vector<GridChaosFunction>& f_seq, const GridSpec& grid) {
  int max_arity = -1;
  for (const auto& f : f_seq) {
    if (f.arity > kMaxChaosArity)
      throw contract_error("ito_to_strat_coefficients: arity cap is 4");
    if (!f.values.empty()) max_arity = std::max(max_arity, f.arity);
  }
  if (max_arity < 0) max_arity = 0;
  std::vector<GridChaosFunction> g;
  for (int m = 0; m <= max_arity; ++m) {
    GridChaosFunction gm(m, grid);
    gm.symmetrized = true;
    for (int k = 0; m + 2 * k <= max_arity; ++k) {
      int n = m + 2 * k;
      const GridChaosFunction* fn = nullptr;
      for (const auto& f : f_seq)
        if (f.arity == n && !f.values.empty()) fn = &f;
      if (!fn) continue;
      GridChaosFunction contracted = *fn;
      for (int j = 0; j < k; ++j) contracted = trace_once(contracted);
      double w = hu_meyer_weight(n, k);  // (m+2k)!/(m! k! 2^k) with n = m+2k
      for (const auto& [key, val] : contracted.values) gm.values[key] += w * val;
    }
    std::erase_if(gm.values, [](const auto& kv) { return kv.second == 0.0; });
    g.push_back(std::move(gm));
  }
  return g;
}

}  // namespace stratlab
