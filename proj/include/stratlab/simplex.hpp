#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "stratlab/errors.hpp"

namespace stratlab {

// Exponent profile (alpha_0, ..., alpha_n) of a nested time-simplex integral
// with kernel prod (t_k - t_{k+1})^{-alpha_k}, t_{n+1} = 0. Profiles built
// from pairing classifications take alpha_k in {0, alpha} with alpha = d/m,
// but any alpha_k < 1 is admissible.
struct ExponentProfile {
  std::vector<double> alphas;  // alpha_0 .. alpha_n
  double alpha = 0.0;          // nominal singularity strength d/m

  int order() const { return static_cast<int>(alphas.size()) - 1; }

  // Suffix sums beta_k = sum_{j >= k} alpha_j.
  std::vector<double> betas() const {
    std::vector<double> b(alphas.size());
    double acc = 0.0;
    for (int k = static_cast<int>(alphas.size()) - 1; k >= 0; --k) {
      acc += alphas[k];
      b[k] = acc;
    }
    return b;
  }

  void validate() const {
    if (alphas.empty()) throw contract_error("ExponentProfile: empty profile");
    for (double a : alphas)
      if (!(a < 1.0) || a < 0.0)
        throw contract_error("ExponentProfile: every alpha_k must lie in [0, 1)");
  }
};

// Profile with alpha_0 = alpha, alpha_k = alpha on `singular_slots`, 0 else.
inline ExponentProfile make_profile(int n, double alpha,
                                    const std::vector<int>& singular_slots) {
  ExponentProfile p;
  p.alpha = alpha;
  p.alphas.assign(n + 1, 0.0);
  p.alphas[0] = alpha;
  for (int s : singular_slots) {
    if (s < 0 || s > n) throw contract_error("make_profile: slot out of range");
    p.alphas[s] = alpha;
  }
  return p;
}

namespace detail {

inline void check_convergent(const ExponentProfile& profile) {
  profile.validate();
  int n = profile.order();
  auto beta = profile.betas();
  for (int k = 0; k < n; ++k) {
    if (!(n - k - beta[k + 1] > 0.0)) {
      std::ostringstream os;
      os << "simplex integral divergent: Beta argument " << n - k - beta[k + 1]
         << " <= 0 at level k=" << k << " (beta_0 = " << beta[0]
         << ", order n = " << n << ")";
      throw contract_error(os.str());
    }
  }
  if (!(beta[0] < n + 1))
    throw contract_error("simplex integral divergent: beta_0 >= n + 1");
}

}  // namespace detail

// Telescoped closed form:
// I_n = t^{n - beta_0} Gamma(1 - beta_n) / Gamma(n + 1 - beta_0)
//       prod_{k=0}^{n-1} Gamma(1 - alpha_k).
inline double simplex_closed_form(double t, const ExponentProfile& profile) {
  if (!(t > 0.0)) throw contract_error("simplex_closed_form: t must be positive");
  detail::check_convergent(profile);
  int n = profile.order();
  auto beta = profile.betas();
  double log_v = (n - beta[0]) * std::log(t) + std::lgamma(1.0 - beta[n]) -
                 std::lgamma(n + 1.0 - beta[0]);
  for (int k = 0; k < n; ++k) log_v += std::lgamma(1.0 - profile.alphas[k]);
  return std::exp(log_v);
}

// Pre-telescoping Beta-chain form, the induction's raw product:
// I_n = t^{n - beta_0} prod_{k=0}^{n-1} B(n - k - beta_{k+1}, 1 - alpha_k).
// Kept as a second algebraic route for the cancellation identity.
inline double simplex_beta_chain(double t, const ExponentProfile& profile) {
  if (!(t > 0.0)) throw contract_error("simplex_beta_chain: t must be positive");
  detail::check_convergent(profile);
  int n = profile.order();
  auto beta = profile.betas();
  double log_v = (n - beta[0]) * std::log(t);
  for (int k = 0; k < n; ++k) {
    double a = n - k - beta[k + 1];
    double b = 1.0 - profile.alphas[k];
    log_v += std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  }
  return std::exp(log_v);
}

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // outer-level relative estimate
  bool converged = false;
};

// Nested adaptive quadrature of the simplex integral, the independent oracle
// for the closed form. Each level substitutes u = (t_k - t_{k+1})^{1-alpha_k},
// which removes its upper-endpoint singularity exactly; the residual endpoint
// behavior (the innermost t_n^{-alpha_n} and the fractional-power decay of
// inner levels) is handled by the tanh-sinh rule, which refines toward the
// endpoints. Tolerances tighten with nesting depth so the noise of an inner
// level stays below the termination target of the level consuming it.
inline QuadratureResult simplex_quadrature(double t, const ExponentProfile& profile,
                                           double rel_tol) {
  if (!(t > 0.0)) throw contract_error("simplex_quadrature: t must be positive");
  detail::check_convergent(profile);
  int n = profile.order();
  if (n > 4) throw contract_error("simplex_quadrature: order cap is 4");
  if (!(rel_tol > 0.0)) throw contract_error("simplex_quadrature: rel_tol must be positive");

  if (n == 0) return {std::pow(t, -profile.alphas[0]), 0.0, true};

  auto level_tol = [&](int k) {  // k = 0 outer ... n-1 innermost
    return std::max(0.3 * rel_tol * std::pow(0.1, n - 1 - k), 1e-13);
  };
  // one integrator per nesting depth; integrate() is not reentrant on a
  // single instance
  std::vector<boost::math::quadrature::tanh_sinh<double>> rules;
  for (int k = 0; k < n; ++k) rules.emplace_back(10);

  struct BudgetExhausted {};
  long budget = 50'000'000;

  std::function<double(int, double, double*)> level = [&](int k, double upper,
                                                          double* err_out) -> double {
    double a_k = profile.alphas[k];
    double p = 1.0 - a_k;
    double b = std::pow(upper, p);
    // two-argument integrand: uc carries the distance to the nearest endpoint
    // at full precision, which the s^{-alpha_n} endpoint needs
    auto f = [&](double u, double uc) -> double {
      if (--budget < 0) throw BudgetExhausted{};
      double comp = u > 0.5 * b ? std::abs(uc) : b - u;  // b - u
      if (!(comp > 0.0)) return 0.0;
      // s = upper * (1 - (u/b)^{1/p}) through the complement ratio
      double s = upper * (-std::expm1(std::log1p(-comp / b) / p));
      if (!(s > 0.0)) return 0.0;
      double v = (k + 1 == n) ? std::pow(s, -profile.alphas[n])
                              : level(k + 1, s, nullptr);
      v /= p;
      return std::isfinite(v) ? v : 0.0;
    };
    double err = 0.0;
    double result = rules[k].integrate(f, 0.0, b, level_tol(k), &err);
    if (err_out) *err_out = err;
    return result;
  };

  QuadratureResult r;
  double outer_err = 0.0;
  try {
    r.value = level(0, t, &outer_err);
  } catch (const BudgetExhausted&) {
    throw numeric_error(
        "simplex_quadrature: evaluation budget exhausted before the requested "
        "tolerance; relax rel_tol");
  }
  r.error_estimate = outer_err;
  r.converged = outer_err <= rel_tol;
  return r;
}

// Summability envelope J_{n,m}(t) = t^{(n+m)(1-alpha/2)-alpha} C^n C^m /
// (n^{n(1-alpha)/2} m^{m(1-alpha)/2}), the n = 0 or m = 0 factor replaced by 1.
inline double jnm_bound(int n, int m, double t, double alpha, double C) {
  if (n < 0 || m < 0) throw contract_error("jnm_bound: n, m must be nonnegative");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw contract_error("jnm_bound: alpha must lie in (0, 1)");
  if (!(C > 0.0)) throw contract_error("jnm_bound: C must be positive");
  if (!(t > 0.0)) throw contract_error("jnm_bound: t must be positive");
  double log_v = ((n + m) * (1.0 - alpha / 2.0) - alpha) * std::log(t) +
                 (n + m) * std::log(C);
  if (n > 0) log_v -= 0.5 * n * (1.0 - alpha) * std::log(static_cast<double>(n));
  if (m > 0) log_v -= 0.5 * m * (1.0 - alpha) * std::log(static_cast<double>(m));
  return std::exp(log_v);
}

// Partial sum over the square n, m <= N.
inline double jnm_partial_sum(int N, double t, double alpha, double C) {
  double s = 0.0;
  for (int n = 0; n <= N; ++n)
    for (int m = 0; m <= N; ++m) s += jnm_bound(n, m, t, alpha, C);
  return s;
}

// Ratio of the Gamma-function time-integral bound
//   Gamma^{nbar}(1-alpha) / (Gamma(n+1-(n0+1) alpha) Gamma(m+1-m0 alpha))
// to the Stirling majorant C^{n+m} / (n^{n(1-alpha/2)} m^{m(1-alpha/2)}).
inline double gamma_ratio_bound_check(int n, int m, int n0, int m0, double alpha,
                                      double C) {
  if (n < 0 || m < 0) throw contract_error("gamma_ratio_bound_check: n, m >= 0");
  if ((n + m) % 2 != 0)
    throw contract_error("gamma_ratio_bound_check: n + m must be even");
  if (2 * n0 > n + 1 || 2 * m0 > m)
    throw contract_error("gamma_ratio_bound_check: need n0 <= (n+1)/2 and m0 <= m/2");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw contract_error("gamma_ratio_bound_check: alpha must lie in [0, 1)");
  if (!(C > 0.0)) throw contract_error("gamma_ratio_bound_check: C must be positive");
  double a1 = n + 1.0 - (n0 + 1.0) * alpha;
  double a2 = m + 1.0 - m0 * alpha;
  if (a1 <= 0.0 || a2 <= 0.0)
    throw contract_error("gamma_ratio_bound_check: Gamma pole (argument <= 0)");
  int nbar = (n + m) / 2;
  double log_num = nbar * std::lgamma(1.0 - alpha) - std::lgamma(a1) - std::lgamma(a2);
  double log_major = (n + m) * std::log(C);
  if (n > 0) log_major -= n * (1.0 - alpha / 2.0) * std::log(static_cast<double>(n));
  if (m > 0) log_major -= m * (1.0 - alpha / 2.0) * std::log(static_cast<double>(m));
  return std::exp(log_num - log_major);
}

// Smallest constant C making the ratio <= 1 over all admissible
// (n, m, n0, m0) with n, m <= n_max and n + m even and positive.
inline double calibrate_bound_constant(int n_max, double alpha) {
  double best_log_c = -1e300;
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n_max; ++m) {
      if ((n + m) % 2 != 0 || n + m == 0) continue;
      int nbar = (n + m) / 2;
      for (int n0 = 0; 2 * n0 <= n + 1; ++n0) {
        double a1 = n + 1.0 - (n0 + 1.0) * alpha;
        if (a1 <= 0.0) continue;
        for (int m0 = 0; 2 * m0 <= m; ++m0) {
          double a2 = m + 1.0 - m0 * alpha;
          if (a2 <= 0.0) continue;
          double log_num =
              nbar * std::lgamma(1.0 - alpha) - std::lgamma(a1) - std::lgamma(a2);
          if (n > 0)
            log_num += n * (1.0 - alpha / 2.0) * std::log(static_cast<double>(n));
          if (m > 0)
            log_num += m * (1.0 - alpha / 2.0) * std::log(static_cast<double>(m));
          best_log_c = std::max(best_log_c, log_num / (n + m));
        }
      }
    }
  }
  return std::exp(best_log_c);
}

}  // namespace stratlab
