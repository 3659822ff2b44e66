#include <catch2/catch_amalgamated.hpp>

#include "stratlab/convergence.hpp"
#include "stratlab/rng.hpp"

using namespace stratlab;
using Catch::Approx;

TEST_CASE("mean and standard error of the mean", "[convergence]") {
  std::vector<double> constant{2.5, 2.5, 2.5, 2.5};
  MeanStdErr c = l2_omega_estimate(constant);
  REQUIRE(c.mean == Approx(2.5));
  REQUIRE(c.std_error == Approx(0.0).margin(1e-15));

  std::vector<double> two{0.0, 2.0};
  MeanStdErr t = l2_omega_estimate(two);
  REQUIRE(t.mean == Approx(1.0));
  REQUIRE(t.std_error == Approx(1.0));

  std::vector<double> one{1.0};
  REQUIRE_THROWS_AS(l2_omega_estimate(one), contract_error);

  // streaming result agrees with a plain two-pass computation
  NormalStream rng(1, 0);
  std::vector<double> xs(1000);
  for (double& x : xs) x = 3.0 + 0.5 * rng.normal();
  MeanStdErr est = l2_omega_estimate(xs);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  double se = std::sqrt(var / (xs.size() * (xs.size() - 1.0)));
  REQUIRE(est.mean == Approx(mean).epsilon(1e-12));
  REQUIRE(est.std_error == Approx(se).epsilon(1e-12));
}

TEST_CASE("rate fit on exact power laws", "[convergence]") {
  std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  std::vector<double> zero_se(4, 0.0);
  std::vector<double> linear, quadratic;
  for (double e : eps) {
    linear.push_back(3.0 * e);
    quadratic.push_back(0.7 * e * e);
  }
  RateFit f1 = fit_rate(eps, linear, zero_se);
  REQUIRE(f1.slope == Approx(1.0).margin(1e-10));
  REQUIRE(f1.ci_high - f1.ci_low < 1e-8);
  RateFit f2 = fit_rate(eps, quadratic, zero_se);
  REQUIRE(f2.slope == Approx(2.0).margin(1e-10));
  REQUIRE(std::exp(f1.intercept) == Approx(3.0).epsilon(1e-8));
}

TEST_CASE("rate fit confidence interval calibration", "[convergence]") {
  // 10% multiplicative noise on a slope-1 law: the 95% CI must cover the
  // truth in at least 90 of 100 repetitions
  NormalStream rng(314, 0);
  std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  int covered = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> mse, se;
    for (double e : eps) {
      double noisy = 2.0 * e * (1.0 + 0.1 * rng.normal());
      mse.push_back(std::max(noisy, 1e-12));
      se.push_back(0.1 * 2.0 * e);
    }
    RateFit f = fit_rate(eps, mse, se);
    if (f.ci_low <= 1.0 && 1.0 <= f.ci_high) ++covered;
  }
  REQUIRE(covered >= 90);
}

TEST_CASE("rate fit contracts", "[convergence]") {
  std::vector<double> two_eps{0.4, 0.2}, two_m{1.0, 0.5}, two_s{0.0, 0.0};
  REQUIRE_THROWS_AS(fit_rate(two_eps, two_m, two_s), contract_error);
  std::vector<double> narrow{0.4, 0.3, 0.2}, m3{1, 1, 1}, s3{0, 0, 0};
  REQUIRE_THROWS_AS(fit_rate(narrow, m3, s3), contract_error);
  std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  std::vector<double> bad_mse{1.0, 0.5, -0.1, 0.2}, se(4, 0.0);
  REQUIRE_THROWS_AS(fit_rate(eps, bad_mse, se), contract_error);
}

namespace {
SimConfig small_config() {
  SimConfig cfg;
  cfg.grid = GridSpec::make(1, 40.0, 256);
  cfg.order = 2;
  cfg.horizon = 0.5;
  cfg.dt = 1.0 / 128.0;
  cfg.model = CorrelationModel{CorrelationKind::gaussian, 10.0, 1.0};
  double s = cfg.model.sigma(1);
  cfg.model.amplitude = 1.0 / (s * s);
  return cfg;
}
}  // namespace

TEST_CASE("coupled ensemble smoke run", "[convergence]") {
  SimConfig cfg = small_config();
  std::vector<double> eps{0.4, 0.2, 0.1};
  ConvergenceOptions opts;
  opts.threads = 2;
  ConvergenceReport rep = run_convergence(cfg, eps, 24, 555, opts);

  REQUIRE(rep.mse.size() == 3);
  for (double m : rep.mse) REQUIRE(m > 0.0);
  REQUIRE_FALSE(rep.conclusive);  // below the 50-realization bar
  REQUIRE(rep.monotone_within_2se);
  REQUIRE(rep.coupling_ratio < 0.5);
  REQUIRE(rep.samples.size() == 3);
  REQUIRE(rep.samples[0].size() == 24);

  // replay determinism, independent of the thread count
  ConvergenceOptions serial = opts;
  serial.threads = 1;
  ConvergenceReport rep2 = run_convergence(cfg, eps, 24, 555, serial);
  REQUIRE(rep.mse == rep2.mse);
  REQUIRE(rep.std_errors == rep2.std_errors);
  REQUIRE(rep.fitted_slope == rep2.fitted_slope);

  // a different seed moves the samples
  ConvergenceReport rep3 = run_convergence(cfg, eps, 24, 556, serial);
  REQUIRE(rep.mse != rep3.mse);
}

TEST_CASE("ensemble contracts", "[convergence]") {
  SimConfig cfg = small_config();
  std::vector<double> eps{0.4, 0.2, 0.1};
  REQUIRE_THROWS_AS(run_convergence(cfg, eps, 1, 1, {}), contract_error);
  std::vector<double> under{0.4, 0.01};
  REQUIRE_THROWS_AS(run_convergence(cfg, under, 8, 1, {}), contract_error);
  std::vector<double> none;
  REQUIRE_THROWS_AS(run_convergence(cfg, none, 8, 1, {}), contract_error);
}

TEST_CASE("coupling correlation strengthens as eps falls", "[convergence]") {
  SimConfig cfg = small_config();
  int reps = 40;
  std::vector<double> eps{0.4, 0.2, 0.1};
  std::vector<double> corr(eps.size(), 0.0);
  for (int r = 0; r < reps; ++r) {
    WhiteNoiseField w = sample_white_noise(cfg.grid, 8080, r);
    PotentialField limit = white_noise_potential(w, cfg.model);
    for (std::size_t e = 0; e < eps.size(); ++e) {
      PotentialField q = mollified_potential(w, cfg.model, eps[e]);
      double dot = 0, qq = 0, ll = 0;
      for (std::size_t i = 0; i < q.field.values.size(); ++i) {
        dot += q.field.values[i] * limit.field.values[i];
        qq += q.field.values[i] * q.field.values[i];
        ll += limit.field.values[i] * limit.field.values[i];
      }
      corr[e] += dot / std::sqrt(qq * ll) / reps;
    }
  }
  REQUIRE(corr[0] > 0.0);
  REQUIRE(corr[1] > corr[0]);
  REQUIRE(corr[2] > corr[1]);
}
