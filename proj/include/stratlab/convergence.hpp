#pragma once

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stratlab/parallel.hpp"
#include "stratlab/potential.hpp"
#include "stratlab/solver.hpp"
#include "stratlab/white_noise.hpp"

namespace stratlab {

struct MeanStdErr {
  double mean = 0.0;
  double std_error = 0.0;
};

// Sample mean and standard error of the mean (Welford accumulation).
inline MeanStdErr l2_omega_estimate(std::span<const double> samples) {
  if (samples.size() < 2)
    throw contract_error("l2_omega_estimate: need at least 2 samples");
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double x : samples) {
    ++k;
    double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  double n = static_cast<double>(k);
  return {mean, std::sqrt(m2 / (n * (n - 1.0)))};
}

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_low = 0.0;   // 95% interval for the slope
  double ci_high = 0.0;
};

// Weighted least squares of log(mse) against log(eps); weights are inverse
// variances of log(mse), i.e. (mse/stderr)^2. The 95% CI uses the weighted
// residual scale and a Student-t quantile with k-2 degrees of freedom.
inline RateFit fit_rate(std::span<const double> eps_values,
                        std::span<const double> mse_values,
                        std::span<const double> stderr_values) {
  std::size_t k = eps_values.size();
  if (k < 3) throw contract_error("fit_rate: need at least 3 points");
  if (mse_values.size() != k || stderr_values.size() != k)
    throw contract_error("fit_rate: input length mismatch");
  double emin = *std::min_element(eps_values.begin(), eps_values.end());
  double emax = *std::max_element(eps_values.begin(), eps_values.end());
  if (!(emin > 0.0)) throw contract_error("fit_rate: eps must be positive");
  if (emax / emin < 4.0)
    throw contract_error("fit_rate: eps values must span a factor >= 4");
  for (double m : mse_values)
    if (!(m > 0.0)) throw contract_error("fit_rate: mse values must be positive");

  bool have_errors = true;
  for (double s : stderr_values) have_errors = have_errors && s > 0.0;
  std::vector<double> x(k), y(k), w(k);
  for (std::size_t i = 0; i < k; ++i) {
    x[i] = std::log(eps_values[i]);
    y[i] = std::log(mse_values[i]);
    double r = have_errors ? stderr_values[i] / mse_values[i] : 1.0;
    w[i] = 1.0 / (r * r);
  }
  double sw = 0, swx = 0, swy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  double xb = swx / sw, yb = swy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += w[i] * (x[i] - xb) * (x[i] - xb);
    sxy += w[i] * (x[i] - xb) * (y[i] - yb);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = yb - fit.slope * xb;
  double rss = 0;
  for (std::size_t i = 0; i < k; ++i) {
    double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += w[i] * r * r;
  }
  double df = static_cast<double>(k - 2);
  double se = std::sqrt(rss / df / sxx);
  double tq = boost::math::quantile(boost::math::students_t(df), 0.975);
  fit.ci_low = fit.slope - tq * se;
  fit.ci_high = fit.slope + tq * se;
  return fit;
}

struct ConvergenceOptions {
  unsigned threads = 1;
  bool coupling_ratio = true;   // also run independent-noise solves at min eps
  bool bias_sentinel = false;   // one small run at doubled N, reported only
  int sentinel_realizations = 8;
};

struct ConvergenceReport {
  std::vector<double> eps_values;
  std::vector<double> mse;          // at the horizon T
  std::vector<double> std_errors;
  std::vector<double> mse_mid;      // at T/2
  double fitted_slope = 0.0;
  double slope_ci_low = 0.0;
  double slope_ci_high = 0.0;
  int n_realizations = 0;
  std::uint64_t master_seed = 0;
  bool conclusive = false;          // stderr/mse < 0.2 everywhere and n >= 50
  bool monotone_within_2se = false;
  double coupling_ratio = 0.0;      // coupled mse / independent mse at min eps
  double bias_sentinel = 0.0;       // fine-grid mse / coarse mse at min eps
  std::string config_digest;
  // raw per-realization squared errors, column-major per eps
  std::vector<std::vector<double>> samples;
};

// Coupled Monte-Carlo ensemble: one white-noise field per realization drives
// both the mollified potentials (every eps) and the white-noise limit; the
// grid-L2 squared differences at T are averaged and the log-log rate fitted.
inline ConvergenceReport run_convergence(const SimConfig& config,
                                         std::span<const double> eps_values,
                                         int n_realizations,
                                         std::uint64_t master_seed,
                                         const ConvergenceOptions& opts = {}) {
  config.validate();
  if (eps_values.empty()) throw contract_error("run_convergence: empty eps ladder");
  if (n_realizations < 2)
    throw contract_error("run_convergence: need at least 2 realizations");
  double h = config.grid.spacing();
  for (double e : eps_values) {
    if (!(e > 0.0)) throw contract_error("run_convergence: eps must be positive");
    if (e * config.model.length_scale < 4.0 * h)
      throw contract_error(
          "run_convergence: eps*l = " + std::to_string(e * config.model.length_scale) +
          " under-resolved, need >= 4 h = " + std::to_string(4.0 * h));
  }
  std::size_t n_eps = eps_values.size();
  std::size_t min_idx = static_cast<std::size_t>(
      std::min_element(eps_values.begin(), eps_values.end()) - eps_values.begin());

  SimConfig run_cfg = config;
  int steps = run_cfg.n_steps();
  if (steps % 2 != 0) {
    run_cfg.dt = run_cfg.horizon / (steps + 1);
    steps += 1;
  }
  run_cfg.save_stride = steps / 2;  // saves exactly {0, T/2, T}

  std::vector<std::vector<double>> sq(n_eps, std::vector<double>(n_realizations));
  std::vector<std::vector<double>> sq_mid(n_eps, std::vector<double>(n_realizations));
  std::vector<double> sq_indep(n_realizations, 0.0);

  auto one_realization = [&](std::size_t r) {
    WhiteNoiseField w = sample_white_noise(run_cfg.grid, master_seed, r);
    PotentialField limit_pot = white_noise_potential(w, run_cfg.model);
    Trajectory limit = solve_with_potential(run_cfg, limit_pot);
    const Field& u_mid = limit.states[limit.states.size() - 2];
    const Field& u_end = limit.states.back();
    for (std::size_t e = 0; e < n_eps; ++e) {
      PotentialField pot = mollified_potential(w, run_cfg.model, eps_values[e]);
      Trajectory t = solve_with_potential(run_cfg, pot);
      double d_end = l2_distance(t.states.back(), u_end);
      double d_mid = l2_distance(t.states[t.states.size() - 2], u_mid);
      sq[e][r] = d_end * d_end;
      sq_mid[e][r] = d_mid * d_mid;
    }
    if (opts.coupling_ratio) {
      WhiteNoiseField w_ind = sample_white_noise(
          run_cfg.grid, master_seed, static_cast<std::uint64_t>(n_realizations) + r);
      PotentialField pot = mollified_potential(w_ind, run_cfg.model, eps_values[min_idx]);
      Trajectory t = solve_with_potential(run_cfg, pot);
      double d = l2_distance(t.states.back(), u_end);
      sq_indep[r] = d * d;
    }
  };
  parallel_for(static_cast<std::size_t>(n_realizations), opts.threads, one_realization);

  ConvergenceReport rep;
  rep.eps_values.assign(eps_values.begin(), eps_values.end());
  rep.n_realizations = n_realizations;
  rep.master_seed = master_seed;
  rep.samples = sq;
  for (std::size_t e = 0; e < n_eps; ++e) {
    MeanStdErr ms = l2_omega_estimate(sq[e]);
    rep.mse.push_back(ms.mean);
    rep.std_errors.push_back(ms.std_error);
    rep.mse_mid.push_back(l2_omega_estimate(sq_mid[e]).mean);
  }
  RateFit fit = fit_rate(rep.eps_values, rep.mse, rep.std_errors);
  rep.fitted_slope = fit.slope;
  rep.slope_ci_low = fit.ci_low;
  rep.slope_ci_high = fit.ci_high;

  bool stat_ok = n_realizations >= 50;
  for (std::size_t e = 0; e < n_eps; ++e)
    stat_ok = stat_ok && rep.std_errors[e] / rep.mse[e] < 0.2;
  rep.conclusive = stat_ok;

  // sorted descending in eps: mse must not increase beyond 2 combined SE
  std::vector<std::size_t> order(n_eps);
  for (std::size_t i = 0; i < n_eps; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rep.eps_values[a] > rep.eps_values[b];
  });
  rep.monotone_within_2se = true;
  for (std::size_t i = 1; i < n_eps; ++i) {
    double prev = rep.mse[order[i - 1]], cur = rep.mse[order[i]];
    double tol = 2.0 * std::hypot(rep.std_errors[order[i - 1]], rep.std_errors[order[i]]);
    if (cur > prev + tol) rep.monotone_within_2se = false;
  }

  if (opts.coupling_ratio) {
    MeanStdErr ind = l2_omega_estimate(sq_indep);
    rep.coupling_ratio = rep.mse[min_idx] / ind.mean;
  }

  if (opts.bias_sentinel) {
    SimConfig fine = run_cfg;
    fine.grid = GridSpec::make(run_cfg.grid.dim, run_cfg.grid.side,
                               run_cfg.grid.n_points * 2);
    int n_s = std::min(opts.sentinel_realizations, n_realizations);
    std::vector<double> sq_fine(n_s);
    parallel_for(static_cast<std::size_t>(n_s), opts.threads, [&](std::size_t r) {
      WhiteNoiseField w = sample_white_noise(fine.grid, master_seed ^ 0x5157u, r);
      Trajectory limit = solve_with_potential(fine, white_noise_potential(w, fine.model));
      PotentialField pot = mollified_potential(w, fine.model, eps_values[min_idx]);
      Trajectory t = solve_with_potential(fine, pot);
      double d = l2_distance(t.states.back(), limit.states.back());
      sq_fine[r] = d * d;
    });
    MeanStdErr f = l2_omega_estimate(sq_fine);
    rep.bias_sentinel = f.mean / rep.mse[min_idx];
  }
  return rep;
}

}  // namespace stratlab
