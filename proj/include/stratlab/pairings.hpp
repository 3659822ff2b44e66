#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

#include "stratlab/errors.hpp"

namespace stratlab {

// A perfect matching of {0, ..., 2n-1}: pairs (k, l(k)) with k < l(k),
// listed in increasing k. The first elements form the domain A0, the second
// elements its complement B0.
struct Pairing {
  std::vector<std::pair<int, int>> pairs;
  int size() const { return static_cast<int>(pairs.size()); }
};

inline constexpr int kMaxPairingIndices = 12;  // enumeration cap

inline double odd_double_factorial(int n) {  // (2n-1)!!
  double p = 1.0;
  for (int k = 3; k <= 2 * n - 1; k += 2) p *= k;
  return p;
}

namespace detail {

inline void enumerate_rec(std::vector<int>& free_idx, Pairing& current,
                          std::vector<Pairing>& out) {
  if (free_idx.empty()) {
    out.push_back(current);
    return;
  }
  int k = free_idx.front();
  for (std::size_t j = 1; j < free_idx.size(); ++j) {
    int partner = free_idx[j];
    std::vector<int> rest;
    rest.reserve(free_idx.size() - 2);
    for (std::size_t q = 1; q < free_idx.size(); ++q)
      if (q != j) rest.push_back(free_idx[q]);
    current.pairs.emplace_back(k, partner);
    enumerate_rec(rest, current, out);
    current.pairs.pop_back();
  }
}

}  // namespace detail

inline std::vector<Pairing> enumerate_pairings(int two_n) {
  if (two_n < 0 || two_n % 2 != 0)
    throw contract_error("enumerate_pairings: index count must be even");
  if (two_n > kMaxPairingIndices)
    throw contract_error("enumerate_pairings: cap is 12 indices");
  std::vector<int> all(two_n);
  for (int i = 0; i < two_n; ++i) all[i] = i;
  std::vector<Pairing> out;
  Pairing cur;
  detail::enumerate_rec(all, cur, out);
  return out;
}

// Isserlis / Wick moment of a centered Gaussian vector:
// E[prod Z_k] = sum over pairings of prod cov(k, l(k)).
inline double gaussian_moment(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols())
    throw contract_error("gaussian_moment: covariance must be square");
  int dim = static_cast<int>(cov.rows());
  if (dim % 2 != 0) return 0.0;  // odd moments of centered Gaussians vanish
  if (dim == 0) return 1.0;
  if (dim > kMaxPairingIndices)
    throw contract_error("gaussian_moment: dimension cap is 12");
  double scale = cov.cwiseAbs().maxCoeff();
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
    throw contract_error("gaussian_moment: covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.eigenvalues().minCoeff() < -1e-10 * std::max(scale, 1.0))
    throw contract_error("gaussian_moment: covariance must be positive semidefinite");
  double total = 0.0;
  for (const Pairing& p : enumerate_pairings(dim)) {
    double term = 1.0;
    for (auto [k, l] : p.pairs) term *= cov(k, l);
    total += term;
  }
  return total;
}

// Crossing classification of a pairing of n + m indices: crossings link the
// first n to the last m; each pair is assigned the slot that carries the time
// singularity (internal pairs keep their first element, crossings alternate
// starting with the first-block side, so an odd count leaves the extra slot
// in the first block).
struct PairingClassification {
  int crossings = 0;
  int n0 = 0;
  int m0 = 0;
  std::vector<int> singular_slots;  // one index per pair, same order as pairs
};

inline PairingClassification classify_pairing(const Pairing& p, int n, int m) {
  if (n < 0 || m < 0 || n + m != 2 * p.size())
    throw contract_error("classify_pairing: need n + m = 2 * pair count");
  PairingClassification c;
  c.singular_slots.resize(p.pairs.size());
  int crossing_seen = 0;
  int internal_first = 0, internal_second = 0;
  for (std::size_t i = 0; i < p.pairs.size(); ++i) {
    auto [k, l] = p.pairs[i];
    bool k_first = k < n, l_first = l < n;
    if (k_first && !l_first) {
      // crossings alternate singular side: k, l(k), k, ...
      bool take_first = (crossing_seen % 2 == 0);
      ++crossing_seen;
      c.singular_slots[i] = take_first ? k : l;
    } else {
      c.singular_slots[i] = k;
      if (k_first)
        ++internal_first;
      else
        ++internal_second;
    }
  }
  c.crossings = crossing_seen;
  c.n0 = internal_first + (crossing_seen + 1) / 2;
  c.m0 = internal_second + crossing_seen / 2;
  return c;
}

}  // namespace stratlab
