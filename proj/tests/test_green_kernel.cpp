#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "stratlab/convergence.hpp"
#include "stratlab/green_kernel.hpp"

using namespace stratlab;
using Catch::Approx;

namespace {
const GridSpec kGrid1d = GridSpec::make(1, 40.0, 1024);
}

TEST_CASE("build_kernel matches the analytic heat kernel", "[green]") {
  double t = 0.5;
  GreenKernel k = build_kernel(2, kGrid1d, t);
  Field g = kernel_real_space(k);
  double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    double x = kGrid1d.coordinate(static_cast<int>(i));
    if (std::abs(x) > 5.0) continue;  // wrap-around tails excluded
    double exact = norm * std::exp(-x * x / (4.0 * t));
    REQUIRE(g.values[i] == Approx(exact).epsilon(1e-6));
  }
}

TEST_CASE("symbol is one at frequency zero and radially symmetric", "[green]") {
  for (int m : {2, 4, 6}) {
    for (double t : {0.01, 0.3, 2.0}) {
      GreenKernel k = build_kernel(m, kGrid1d, t);
      REQUIRE(k.symbol[0] == 1.0);
      for (std::size_t i = 1; i < k.symbol.size(); ++i) {
        REQUIRE(k.symbol[i] >= 0.0);  // high modes underflow exp(-t |xi|^m)
        REQUIRE(k.symbol[i] <= 1.0);
        double xi = kGrid1d.angular_frequency(static_cast<int>(i));
        if (t * std::pow(std::abs(xi), m) < 700.0) REQUIRE(k.symbol[i] > 0.0);
        // reflection partner carries the identical symbol value
        std::size_t r = (k.symbol.size() - i) % k.symbol.size();
        REQUIRE(k.symbol[i] == k.symbol[r]);
      }
    }
  }
}

TEST_CASE("self-similar scaling G(t,x) = t^{-d/m} G(1, t^{-1/m} x)", "[green]") {
  // t = 2^m: t^{-1/m} = 1/2 maps even grid points onto grid points. The
  // wide-kernel side is periodized, so skip points where its wrap-around
  // image (half the reference value at distance L/2 - |x|) is not far below
  // the tolerance; the m = 4 tails are stretched-exponential, hence the
  // larger box at unchanged spacing.
  auto grid = GridSpec::make(1, 80.0, 2048);
  int n = grid.n_points;
  double L = grid.side;
  for (int m : {2, 4}) {
    Field g_wide = kernel_real_space(build_kernel(m, grid, std::pow(2.0, m)));
    Field g1 = kernel_real_space(build_kernel(m, grid, 1.0));
    double peak = linf_norm(g1);
    int compared = 0;
    for (int j = -n / 4; j < n / 4; ++j) {
      int jw = ((2 * j) % n + n) % n;
      int j1 = (j % n + n) % n;
      double ref = g1.values[j1];
      if (std::abs(ref) < 1e-7 * peak) continue;
      double x = std::abs(grid.coordinate(j1));
      int j_img = static_cast<int>(std::lround((L / 2.0 - x) / grid.spacing()));
      double contamination = 0.5 * std::abs(g1.values[(j_img % n + n) % n]);
      if (contamination > 0.2e-6 * std::abs(ref)) continue;
      ++compared;
      REQUIRE(2.0 * g_wide.values[jw] == Approx(ref).epsilon(1e-6));
    }
    REQUIRE(compared > 50);  // the comparison covers the kernel core
  }
}

TEST_CASE("order and time contracts are enforced", "[green]") {
  REQUIRE_THROWS_AS(build_kernel(3, kGrid1d, 1.0), contract_error);
  REQUIRE_THROWS_AS(build_kernel(2, GridSpec::make(2, 10.0, 32), 1.0), contract_error);
  REQUIRE_THROWS_AS(build_kernel(0, kGrid1d, 1.0), contract_error);
  REQUIRE_THROWS_AS(build_kernel(2, kGrid1d, 0.0), contract_error);
  REQUIRE_THROWS_AS(build_kernel(2, kGrid1d, -1.0), contract_error);
}

TEST_CASE("semigroup fixes constants and composes exactly", "[green]") {
  Field ones(kGrid1d, 1.0);
  Field out = semigroup_apply(build_kernel(4, kGrid1d, 0.7), ones);
  for (double v : out.values) REQUIRE(v == Approx(1.0).margin(1e-13));

  Field bump(kGrid1d);
  for (std::size_t i = 0; i < bump.values.size(); ++i) {
    double x = kGrid1d.coordinate(static_cast<int>(i));
    bump.values[i] = std::exp(-x * x);
  }
  for (int m : {2, 4}) {
    for (auto [t1, t2] : {std::pair{0.1, 0.4}, std::pair{0.05, 0.9}}) {
      Field two_step = semigroup_apply(build_kernel(m, kGrid1d, t2),
                                       semigroup_apply(build_kernel(m, kGrid1d, t1), bump));
      Field one_step = semigroup_apply(build_kernel(m, kGrid1d, t1 + t2), bump);
      REQUIRE(l2_distance(two_step, one_step) / l2_norm(one_step) < 1e-12);
    }
  }
}

TEST_CASE("heat flow spreads a Gaussian bump by 2t per unit time", "[green]") {
  double s = 1.0, t = 0.5;
  Field bump(kGrid1d);
  for (std::size_t i = 0; i < bump.values.size(); ++i) {
    double x = kGrid1d.coordinate(static_cast<int>(i));
    bump.values[i] = std::exp(-x * x / (2.0 * s * s));
  }
  Field evolved = semigroup_apply(build_kernel(2, kGrid1d, t), bump);
  double mass = 0.0, second = 0.0;
  for (std::size_t i = 0; i < evolved.values.size(); ++i) {
    double x = kGrid1d.coordinate(static_cast<int>(i));
    mass += evolved.values[i];
    second += x * x * evolved.values[i];
  }
  REQUIRE(second / mass == Approx(s * s + 2.0 * t).epsilon(1e-8));
}

TEST_CASE("semigroup rejects mismatched grids", "[green]") {
  Field other(GridSpec::make(1, 40.0, 512), 1.0);
  REQUIRE_THROWS_AS(semigroup_apply(build_kernel(2, kGrid1d, 0.1), other),
                    contract_error);
}

TEST_CASE("kernel bounds: unit mass and the heat-kernel peak", "[green]") {
  auto mesh = log_time_mesh(kGrid1d, 2, 1.0);
  KernelBoundsReport rep = kernel_bounds(2, kGrid1d, mesh);
  REQUIRE(rep.l1_sup == Approx(1.0).epsilon(1e-6));
  REQUIRE(rep.linf_scaled_sup ==
          Approx(1.0 / std::sqrt(4.0 * std::numbers::pi)).epsilon(1e-4));
  REQUIRE(rep.l2_scaled_sup > 0.0);
  REQUIRE(std::isfinite(rep.l2_scaled_sup));
  REQUIRE_THROWS_AS(kernel_bounds(2, kGrid1d, std::vector<double>{}), contract_error);
}

TEST_CASE("kernel bounds stable under grid refinement", "[green]") {
  auto coarse_grid = GridSpec::make(1, 40.0, 512);
  auto fine_grid = GridSpec::make(1, 40.0, 1024);
  // probe identical times, chosen above both grids' resolution floors
  auto mesh = log_time_mesh(coarse_grid, 4, 1.0);
  KernelBoundsReport coarse = kernel_bounds(4, coarse_grid, mesh);
  KernelBoundsReport fine = kernel_bounds(4, fine_grid, mesh);
  REQUIRE(fine.l1_sup == Approx(coarse.l1_sup).epsilon(0.02));
  REQUIRE(fine.l2_scaled_sup == Approx(coarse.l2_scaled_sup).epsilon(0.02));
  REQUIRE(fine.linf_scaled_sup == Approx(coarse.linf_scaled_sup).epsilon(0.02));
}

TEST_CASE("modulus of continuity basics", "[green]") {
  std::vector<double> zero{0.0};
  REQUIRE(modulus_of_continuity(2, kGrid1d, 0.3, zero) == 0.0);

  std::vector<double> y{0.37}, ny{-0.37};
  double v = modulus_of_continuity(2, kGrid1d, 0.3, y);
  double vn = modulus_of_continuity(2, kGrid1d, 0.3, ny);
  REQUIRE(v == Approx(vn).epsilon(1e-12));

  std::vector<double> too_far{11.0};
  REQUIRE_THROWS_AS(modulus_of_continuity(2, kGrid1d, 0.3, too_far), contract_error);
}

TEST_CASE("modulus obeys the gradient bound and vanishes along halving shifts",
          "[green]") {
  // m=2, gamma=1: s * int |G - G(.+y)| <= s |y| ||dG||_1 = |y| sqrt(s/pi)
  for (double s : {0.1, 0.5}) {
    double prev = 1e300;
    for (double w : {0.8, 0.4, 0.2, 0.1, 0.05}) {
      std::vector<double> y{w};
      double v = modulus_of_continuity(2, kGrid1d, s, y);
      REQUIRE(v <= std::sqrt(s / std::numbers::pi) * w * (1.0 + 1e-9));
      REQUIRE(v < prev);
      prev = v;
    }
    REQUIRE(prev < 0.05);  // tends to zero with the shift
  }
}

TEST_CASE("coupling functional decays linearly in eps for m=2 and m=4", "[green]") {
  auto grid = GridSpec::make(1, 40.0, 512);
  CorrelationModel model{CorrelationKind::gaussian, 1.0, 1.0};
  Field rho = rho_kernel(model, grid);
  std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  for (int m : {2, 4}) {
    std::vector<double> vals;
    for (double e : eps) {
      MepsResult r = m_epsilon(m, grid, rho, 0.5, e);
      REQUIRE_FALSE(r.mesh_too_coarse);
      vals.push_back(r.value);
    }
    std::vector<double> no_w(eps.size(), 0.0);
    RateFit fit = fit_rate(eps, vals, no_w);
    REQUIRE(fit.slope == Approx(1.0).margin(0.3));
  }
}

TEST_CASE("coupling functional edge cases", "[green]") {
  auto grid = GridSpec::make(1, 40.0, 512);
  CorrelationModel model{CorrelationKind::gaussian, 1.0, 1.0};
  Field rho = rho_kernel(model, grid);
  REQUIRE(m_epsilon(2, grid, rho, 0.5, 0.0).value == 0.0);
  // shift pushed past L/4 is rejected
  REQUIRE_THROWS_AS(m_epsilon(2, grid, rho, 0.5, 3.0), contract_error);
  Field empty(grid);
  REQUIRE_THROWS_AS(m_epsilon(2, grid, empty, 0.5, 0.1), contract_error);
}

TEST_CASE("signed kernel mass is conserved for every order", "[green]") {
  // int G dx = symbol(0) = 1 exactly, negative lobes and all
  for (int m : {2, 4, 6}) {
    for (double t : {0.01, 0.2, 1.5}) {
      Field g = kernel_real_space(build_kernel(m, kGrid1d, t));
      REQUIRE(integral(g) == Approx(1.0).margin(1e-12));
    }
  }
}

TEST_CASE("two-dimensional kernels: mass, composition, bounds", "[green][2d]") {
  auto grid = GridSpec::make(2, 20.0, 64);
  Field g = kernel_real_space(build_kernel(4, grid, 0.3));
  REQUIRE(integral(g) == Approx(1.0).margin(1e-12));

  Field bump(grid);
  for (std::size_t i = 0; i < bump.values.size(); ++i) {
    double r = grid.radius(i);
    bump.values[i] = std::exp(-r * r);
  }
  Field two = semigroup_apply(build_kernel(4, grid, 0.2),
                              semigroup_apply(build_kernel(4, grid, 0.1), bump));
  Field one = semigroup_apply(build_kernel(4, grid, 0.3), bump);
  REQUIRE(l2_distance(two, one) / l2_norm(one) < 1e-12);

  auto mesh = log_time_mesh(grid, 4, 0.5, 16);
  KernelBoundsReport rep = kernel_bounds(4, grid, mesh);
  REQUIRE(std::isfinite(rep.l1_sup));
  REQUIRE(rep.l1_sup >= 1.0);  // |G| dominates the signed unit mass
  REQUIRE(rep.l2_scaled_sup > 0.0);
  REQUIRE(rep.linf_scaled_sup > 0.0);

  // m = 2 in two dimensions violates m > d
  REQUIRE_THROWS_AS(build_kernel(2, grid, 0.1), contract_error);
}
