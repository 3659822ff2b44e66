// stratlab command line: every experiment as a subcommand with declarative
// config, JSON/CSV reports and a manifest per output set.
//
// Exit codes: 0 success, 2 usage/contract violation, 3 inconclusive
// statistics, 4 numerical failure.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <functional>

#include "stratlab/stratlab.hpp"

namespace {

using namespace stratlab;

constexpr int kExitOk = 0;
constexpr int kExitContract = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitNumeric = 4;

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw contract_error("empty list: " + csv);
  return out;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void emit(const std::string& subcommand, const std::string& out_path,
          json report, const std::string& digest, std::uint64_t seed,
          const Timer& timer, std::vector<std::string> extra_outputs = {}) {
  std::string manifest_path = out_path + ".manifest.json";
  report["config_digest"] = digest;
  report["manifest"] = manifest_path;
  write_json_file(out_path, report);
  RunManifest man;
  man.subcommand = subcommand;
  man.config_digest = digest;
  man.master_seed = seed;
  man.wall_clock_seconds = timer.seconds();
  man.outputs.push_back(out_path);
  for (auto& p : extra_outputs) man.outputs.push_back(p);
  write_json_file(manifest_path, to_json(man));
}

// Resolve the correlation model; amplitude <= 0 means "normalize so sigma=1".
CorrelationModel make_model(const std::string& kind, double length, double amplitude,
                            int dim) {
  CorrelationModel m{correlation_kind_from_string(kind), length, 1.0};
  if (amplitude > 0.0) {
    m.amplitude = amplitude;
  } else {
    double s = m.sigma(dim);
    m.amplitude = 1.0 / (s * s);
  }
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// green-bounds
// ---------------------------------------------------------------------------

struct GreenBoundsArgs {
  int m = 0, d = 0, N = 1024;
  double L = 40.0, t_max = 1.0;
  int t_points = 64;
  std::string times_csv;
  std::string out = "green_bounds.json";
};

int run_green_bounds(const GreenBoundsArgs& a) {
  Timer timer;
  GridSpec grid = GridSpec::make(a.d, a.L, a.N);
  std::vector<double> times = a.times_csv.empty()
                                  ? log_time_mesh(grid, a.m, a.t_max, a.t_points)
                                  : parse_list(a.times_csv);
  KernelBoundsReport rep = kernel_bounds(a.m, grid, times);
  std::ostringstream cfg;
  cfg << "green-bounds m=" << a.m << " d=" << a.d << " L=" << a.L << " N=" << a.N
      << " t_max=" << a.t_max << " t_points=" << a.t_points
      << " times=" << a.times_csv;
  emit("green-bounds", a.out, to_json(rep), fnv1a_digest(cfg.str()), 0, timer);
  std::printf("green-bounds: l1_sup=%.8f l2_scaled_sup=%.8f linf_scaled_sup=%.8f -> %s\n",
              rep.l1_sup, rep.l2_scaled_sup, rep.linf_scaled_sup, a.out.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// converge
// ---------------------------------------------------------------------------

struct ConvergeArgs {
  int d = 1, N = 512, m = 2;
  double L = 40.0, T = 0.5, dt = 1.0 / 256.0;
  std::string u0_kind = "gaussian_bump";
  double u0_width = 0.0;
  std::string model_kind = "gaussian";
  double model_length = 10.0;
  double model_amplitude = 0.0;  // 0 -> sigma = 1
  std::string eps_csv = "0.4,0.2,0.1,0.05";
  int realizations = 200;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool no_coupling_ratio = false;
  bool sentinel = false;
  std::string config_path;
  std::string out = "converge.json";
  std::string samples_out;
  std::string potential_out;
  std::string trajectory_out;
};

// Precedence: defaults < config file < command-line flags. `given` reports
// whether a flag was typed, in which case the file does not touch it.
void apply_converge_config(ConvergeArgs& a,
                           const std::function<bool(const char*)>& given) {
  auto kv = parse_kv_file(a.config_path);
  using stratlab::detail::kv_double;
  using stratlab::detail::kv_int;
  using stratlab::detail::kv_string;
  if (!given("--d")) a.d = kv_int(kv, "d", a.d);
  if (!given("--N")) a.N = kv_int(kv, "N", a.N);
  if (!given("--m")) a.m = kv_int(kv, "m", a.m);
  if (!given("--L")) a.L = kv_double(kv, "L", a.L);
  if (!given("--T")) a.T = kv_double(kv, "T", a.T);
  if (!given("--dt")) a.dt = kv_double(kv, "dt", a.dt);
  if (!given("--u0_kind")) a.u0_kind = kv_string(kv, "u0_kind", a.u0_kind);
  if (!given("--u0_width")) a.u0_width = kv_double(kv, "u0_width", a.u0_width);
  if (!given("--model_kind")) a.model_kind = kv_string(kv, "model_kind", a.model_kind);
  if (!given("--model_length"))
    a.model_length = kv_double(kv, "model_length", a.model_length);
  if (!given("--model_amplitude"))
    a.model_amplitude = kv_double(kv, "model_amplitude", a.model_amplitude);
  if (!given("--eps")) a.eps_csv = kv_string(kv, "eps", a.eps_csv);
  if (!given("--realizations"))
    a.realizations = kv_int(kv, "realizations", a.realizations);
  if (!given("--seed"))
    a.seed = static_cast<std::uint64_t>(kv_double(kv, "seed", static_cast<double>(a.seed)));
  if (!given("--threads"))
    a.threads = static_cast<unsigned>(kv_int(kv, "threads", static_cast<int>(a.threads)));
}

int run_converge(const ConvergeArgs& a) {
  Timer timer;
  SimConfig cfg;
  cfg.grid = GridSpec::make(a.d, a.L, a.N);
  cfg.order = a.m;
  cfg.horizon = a.T;
  cfg.dt = a.dt;
  cfg.u0.kind = InitialCondition::kind_from_string(a.u0_kind);
  cfg.u0.width = a.u0_width;
  cfg.model = make_model(a.model_kind, a.model_length, a.model_amplitude, a.d);
  cfg.validate();
  std::vector<double> eps = parse_list(a.eps_csv);

  ConvergenceOptions opts;
  opts.threads = a.threads == 0 ? default_thread_count() : a.threads;
  opts.coupling_ratio = !a.no_coupling_ratio;
  opts.bias_sentinel = a.sentinel;
  ConvergenceReport rep = run_convergence(cfg, eps, a.realizations, a.seed, opts);
  std::ostringstream digest_src;
  digest_src << sim_config_to_string(cfg) << "eps=" << a.eps_csv
             << "\nrealizations=" << a.realizations << "\nseed=" << a.seed << "\n";
  rep.config_digest = fnv1a_digest(digest_src.str());

  std::vector<std::string> extras;
  if (!a.samples_out.empty()) {
    write_samples_csv(a.samples_out, rep);
    extras.push_back(a.samples_out);
  }
  if (!a.potential_out.empty()) {
    WhiteNoiseField w = sample_white_noise(cfg.grid, a.seed, 0);
    write_field_csv(a.potential_out,
                    mollified_potential(w, cfg.model, eps.front()).field);
    extras.push_back(a.potential_out);
  }
  if (!a.trajectory_out.empty()) {
    WhiteNoiseField w = sample_white_noise(cfg.grid, a.seed, 0);
    SimConfig tc = cfg;
    tc.save_stride = std::max(1, tc.n_steps() / 32);
    write_trajectory_csv(a.trajectory_out,
                         solve_with_potential(tc, white_noise_potential(w, tc.model)));
    extras.push_back(a.trajectory_out);
  }
  emit("converge", a.out, to_json(rep), rep.config_digest, a.seed, timer, extras);
  std::printf("converge: slope=%.4f CI=[%.4f, %.4f] conclusive=%s monotone=%s "
              "coupling_ratio=%.4f -> %s\n",
              rep.fitted_slope, rep.slope_ci_low, rep.slope_ci_high,
              rep.conclusive ? "yes" : "no", rep.monotone_within_2se ? "yes" : "no",
              rep.coupling_ratio, a.out.c_str());
  if (!rep.conclusive) {
    std::fprintf(stderr, "converge: statistics inconclusive "
                         "(need stderr/mse < 0.2 at every eps and >= 50 realizations)\n");
    return kExitInconclusive;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// chaos-verify
// ---------------------------------------------------------------------------

struct ChaosVerifyArgs {
  int max_n = 3;
  long mc_samples = 200000;
  int mc_realizations = 4000;
  std::uint64_t seed = 7;
  std::string out = "chaos_verify.json";
};

int run_chaos_verify(const ChaosVerifyArgs& a) {
  Timer timer;
  if (a.max_n < 1 || a.max_n > 4)
    throw contract_error("chaos-verify: --max-n must be in [1, 4]");
  json checks = json::array();
  bool all_pass = true;
  auto record = [&](const std::string& name, bool pass, json detail) {
    checks.push_back(json{{"name", name}, {"pass", pass}, {"detail", detail}});
    all_pass = all_pass && pass;
    std::printf("  [%s] %s\n", pass ? "ok" : "FAIL", name.c_str());
  };

  // pairing counts (2n-1)!!
  {
    json detail = json::array();
    bool pass = true;
    for (int n = 1; n <= a.max_n; ++n) {
      auto p = enumerate_pairings(2 * n);
      double expect = odd_double_factorial(n);
      bool ok = static_cast<double>(p.size()) == expect;
      pass = pass && ok;
      detail.push_back(json{{"n", n}, {"count", p.size()}, {"expected", expect}});
    }
    record("pairing_counts", pass, detail);
  }

  // crossing classification bounds, exhaustive for n+m <= 8
  {
    bool pass = true;
    json failing;
    for (int total = 2; total <= 8; total += 2) {
      auto pairings = enumerate_pairings(total);
      for (int n = 0; n <= total; ++n) {
        int m = total - n;
        for (const auto& p : pairings) {
          auto c = classify_pairing(p, n, m);
          bool ok = 2 * c.n0 <= n + 1 && 2 * c.m0 <= m && c.n0 + c.m0 == total / 2;
          if (!ok && pass) {
            failing = json{{"n", n}, {"m", m}, {"crossings", c.crossings},
                           {"n0", c.n0}, {"m0", c.m0}};
            pass = false;
          }
        }
      }
    }
    record("crossing_bounds_exhaustive", pass, failing);
  }

  // Isserlis vs Monte-Carlo at 2n = 6
  {
    bool pass = true;
    json detail = json::array();
    NormalStream rng(a.seed, 100);
    for (int rep = 0; rep < 3; ++rep) {
      Eigen::MatrixXd A(6, 6);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) A(i, j) = rng.normal();
      Eigen::MatrixXd cov = A * A.transpose() / 6.0;
      double exact = gaussian_moment(cov);
      Eigen::LLT<Eigen::MatrixXd> llt(cov);
      Eigen::MatrixXd Lf = llt.matrixL();
      double sum = 0, sum2 = 0;
      Eigen::VectorXd z(6);
      for (long s = 0; s < a.mc_samples; ++s) {
        for (int i = 0; i < 6; ++i) z(i) = rng.normal();
        Eigen::VectorXd x = Lf * z;
        double prod = 1;
        for (int i = 0; i < 6; ++i) prod *= x(i);
        sum += prod;
        sum2 += prod * prod;
      }
      double n = static_cast<double>(a.mc_samples);
      double mean = sum / n;
      double se = std::sqrt((sum2 / n - mean * mean) / n);
      bool ok = std::abs(mean - exact) <= 4.0 * se;
      pass = pass && ok;
      detail.push_back(json{{"exact", exact}, {"mc", mean}, {"se", se}, {"pass", ok}});
    }
    record("isserlis_vs_mc_2n6", pass, detail);
  }

  // realization-wise Hu-Meyer identity
  {
    GridSpec grid = GridSpec::make(1, 8.0, 64);
    NormalStream rng(a.seed, 200);
    bool pass = true;
    json failing;
    for (int n = 2; n <= std::min(a.max_n, 3); ++n) {
      for (int rep = 0; rep < 25 && pass; ++rep) {
        GridChaosFunction f(n, grid);
        for (int e = 0; e < 8; ++e) {
          std::vector<std::int32_t> key(n);
          for (int i = 0; i < n; ++i)
            key[i] = static_cast<std::int32_t>(rng.uniform() * 64);
          f.values[make_chaos_key(key)] += rng.normal();
        }
        GridChaosFunction fs = symmetrize(f);
        auto terms = hu_meyer_strat_to_ito(fs);
        for (int w = 0; w < 4 && pass; ++w) {
          WhiteNoiseField noise = sample_white_noise(grid, a.seed, 300 + w);
          double lhs = discrete_strat_integral(fs, noise);
          double rhs = 0;
          for (std::size_t k = 0; k < terms.size(); ++k)
            rhs += discrete_ito_integral(terms[k], noise);
          double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-12});
          if (std::abs(lhs - rhs) / scale > 1e-10) {
            pass = false;
            failing = json{{"n", n}, {"rep", rep}, {"lhs", lhs}, {"rhs", rhs}};
          }
        }
      }
    }
    record("hu_meyer_realizationwise", pass, failing);
  }

  // orthogonality of Ito chaoses across orders (MC)
  {
    GridSpec grid = GridSpec::make(1, 8.0, 64);
    GridChaosFunction phi(1, grid);
    for (int j = 20; j < 28; ++j) phi.add({j}, 1.0);
    GridChaosFunction g2(2, grid);
    for (int j = 20; j < 26; ++j)
      for (int k = 20; k < 26; ++k) g2.add({j, k}, 0.3);
    g2.symmetrized = true;
    double sum = 0, sum2 = 0;
    for (int r = 0; r < a.mc_realizations; ++r) {
      WhiteNoiseField noise = sample_white_noise(grid, a.seed, 1000 + r);
      double v = discrete_ito_integral(g2, noise) * discrete_ito_integral(phi, noise);
      sum += v;
      sum2 += v * v;
    }
    double n = static_cast<double>(a.mc_realizations);
    double mean = sum / n;
    double se = std::sqrt((sum2 / n - mean * mean) / n);
    bool pass = std::abs(mean) <= 4.0 * se;
    record("ito_orthogonality_mc", pass,
           json{{"mean", mean}, {"se", se}});
  }

  json report{{"schema_version", kReportSchemaVersion},
              {"max_n", a.max_n},
              {"mc_samples", a.mc_samples},
              {"seed", a.seed},
              {"all_pass", all_pass},
              {"checks", checks}};
  std::ostringstream cfg;
  cfg << "chaos-verify max_n=" << a.max_n << " mc=" << a.mc_samples
      << " seed=" << a.seed;
  emit("chaos-verify", a.out, report, fnv1a_digest(cfg.str()), a.seed, timer);
  std::printf("chaos-verify: %s -> %s\n", all_pass ? "all checks passed" : "FAILURES",
              a.out.c_str());
  return all_pass ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------------------
// simplex
// ---------------------------------------------------------------------------

struct SimplexArgs {
  int n = 2;
  double alpha = 0.5;
  double t = 1.0;
  double tol = 1e-4;
  int scan_max = 20;
  std::string out = "simplex.json";
  std::string scan_out;
};

int run_simplex(const SimplexArgs& a) {
  Timer timer;
  if (a.n < 1 || a.n > 3) throw contract_error("simplex: --n must be in [1, 3]");
  if (!(a.alpha > 0.0 && a.alpha < 1.0))
    throw contract_error("simplex: --alpha must lie in (0, 1)");
  json profiles = json::array();
  double max_rel = 0.0, max_tele = 0.0;
  for (int mask = 0; mask < (1 << (a.n + 1)); ++mask) {
    ExponentProfile p;
    p.alpha = a.alpha;
    for (int k = 0; k <= a.n; ++k)
      p.alphas.push_back((mask >> k) & 1 ? a.alpha : 0.0);
    double closed = simplex_closed_form(a.t, p);
    QuadratureResult q = simplex_quadrature(a.t, p, a.tol * 0.1);
    double rel = std::abs(closed - q.value) / std::abs(closed);
    double chain = simplex_beta_chain(a.t, p);
    double tele = std::abs(closed - chain) / std::abs(closed);
    max_rel = std::max(max_rel, rel);
    max_tele = std::max(max_tele, tele);
    profiles.push_back(json{{"alphas", p.alphas},
                            {"closed_form", closed},
                            {"quadrature", q.value},
                            {"rel_err", rel},
                            {"beta_chain_rel_err", tele}});
  }
  bool pass = max_rel < a.tol && max_tele < 1e-12;
  double C = calibrate_bound_constant(a.scan_max, a.alpha);
  json report{{"schema_version", kReportSchemaVersion},
              {"n", a.n},
              {"alpha", a.alpha},
              {"t", a.t},
              {"max_rel_err", max_rel},
              {"max_telescoping_rel_err", max_tele},
              {"calibrated_stirling_constant", C},
              {"pass", pass},
              {"profiles", profiles}};
  std::vector<std::string> extras;
  if (!a.scan_out.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << "n,m,alpha,value,ratio\n";
    for (int n = 0; n <= a.scan_max; ++n)
      for (int m = 0; m <= a.scan_max; ++m) {
        if ((n + m) % 2 != 0 || n + m == 0) continue;
        int n0 = (n + 1) / 2, m0 = m / 2;
        double v = jnm_bound(n, m, a.t, a.alpha, C);
        double r = gamma_ratio_bound_check(n, m, n0, m0, a.alpha, C);
        os << n << "," << m << "," << a.alpha << "," << v << "," << r << "\n";
      }
    write_text_file(a.scan_out, os.str());
    extras.push_back(a.scan_out);
  }
  std::ostringstream cfg;
  cfg << "simplex n=" << a.n << " alpha=" << a.alpha << " t=" << a.t
      << " tol=" << a.tol;
  emit("simplex", a.out, report, fnv1a_digest(cfg.str()), 0, timer, extras);
  std::printf("simplex: max closed-vs-quadrature rel err = %.3g (tol %.1g), "
              "telescoping %.3g, C=%.4f -> %s\n",
              max_rel, a.tol, max_tele, C, a.out.c_str());
  if (!pass) {
    std::fprintf(stderr, "simplex: tolerance exceeded\n");
    return kExitNumeric;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// m-epsilon
// ---------------------------------------------------------------------------

struct MepsArgs {
  int m = 2, d = 1, N = 1024;
  double L = 40.0, T = 0.5;
  std::string kind = "gaussian";
  double ell = 1.0, amplitude = 1.0;
  std::string eps_csv = "0.4,0.2,0.1,0.05";
  std::string out = "m_epsilon.json";
  std::string csv_out;
};

int run_m_epsilon(const MepsArgs& a) {
  Timer timer;
  GridSpec grid = GridSpec::make(a.d, a.L, a.N);
  CorrelationModel model{correlation_kind_from_string(a.kind), a.ell, a.amplitude};
  model.validate();
  Field rho = rho_kernel(model, grid);
  std::vector<double> eps = parse_list(a.eps_csv);
  std::vector<double> values;
  json per_eps = json::array();
  bool any_coarse = false;
  for (double e : eps) {
    MepsResult r = m_epsilon(a.m, grid, rho, a.T, e);
    values.push_back(r.value);
    any_coarse = any_coarse || r.mesh_too_coarse;
    per_eps.push_back(to_json(r, e));
    std::printf("  eps=%-6g M_eps=%.8g argmax_t=%.4g%s\n", e, r.value, r.argmax_time,
                r.mesh_too_coarse ? " (mesh too coarse)" : "");
  }
  std::vector<double> no_weights(eps.size(), 0.0);
  RateFit fit = fit_rate(eps, values, no_weights);
  json report{{"schema_version", kReportSchemaVersion},
              {"m", a.m},
              {"d", a.d},
              {"L", a.L},
              {"N", a.N},
              {"T", a.T},
              {"kind", a.kind},
              {"ell", a.ell},
              {"amplitude", a.amplitude},
              {"eps", eps},
              {"m_eps", values},
              {"slope", fit.slope},
              {"mesh_too_coarse", any_coarse},
              {"per_eps", per_eps}};
  std::vector<std::string> extras;
  if (!a.csv_out.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << "eps,m_eps\n";
    for (std::size_t i = 0; i < eps.size(); ++i)
      os << eps[i] << "," << values[i] << "\n";
    write_text_file(a.csv_out, os.str());
    extras.push_back(a.csv_out);
  }
  std::ostringstream cfg;
  cfg << "m-epsilon m=" << a.m << " d=" << a.d << " L=" << a.L << " N=" << a.N
      << " T=" << a.T << " kind=" << a.kind << " ell=" << a.ell
      << " amp=" << a.amplitude << " eps=" << a.eps_csv;
  emit("m-epsilon", a.out, report, fnv1a_digest(cfg.str()), 0, timer, extras);
  std::printf("m-epsilon: slope=%.4f -> %s\n", fit.slope, a.out.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stratlab: parabolic flows with highly oscillatory Gaussian "
               "potentials and their white-noise limit"};
  app.require_subcommand(1);

  GreenBoundsArgs gb;
  auto* cmd_gb = app.add_subcommand(
      "green-bounds", "certify Green's-kernel L1/L2/Linf bounds on a time mesh");
  cmd_gb->add_option("--m", gb.m, "even operator order, > d")->required();
  cmd_gb->add_option("--d", gb.d, "space dimension")->required();
  cmd_gb->add_option("--L", gb.L, "box side");
  cmd_gb->add_option("--N", gb.N, "points per axis (power of two)");
  cmd_gb->add_option("--t-max", gb.t_max, "largest probed time");
  cmd_gb->add_option("--t-points", gb.t_points, "log-mesh size");
  cmd_gb->add_option("--times", gb.times_csv, "explicit comma-separated times");
  cmd_gb->add_option("--out", gb.out, "report path");

  ConvergeArgs cv;
  auto* cmd_cv = app.add_subcommand(
      "converge", "coupled Monte-Carlo convergence of u_eps to the SPDE solution");
  cmd_cv->add_option("--config", cv.config_path,
                     "flat key=value config file (command line overrides)");
  cmd_cv->add_option("--d", cv.d, "space dimension");
  cmd_cv->add_option("--m", cv.m, "even operator order");
  cmd_cv->add_option("--L", cv.L, "box side");
  cmd_cv->add_option("--N", cv.N, "points per axis");
  cmd_cv->add_option("--T", cv.T, "horizon");
  cmd_cv->add_option("--dt", cv.dt, "time step");
  cmd_cv->add_option("--u0_kind", cv.u0_kind, "gaussian_bump | indicator | point_mass");
  cmd_cv->add_option("--u0_width", cv.u0_width, "initial data width (0 -> L/40)");
  cmd_cv->add_option("--model_kind", cv.model_kind, "gaussian | sech");
  cmd_cv->add_option("--model_length", cv.model_length, "correlation length l");
  cmd_cv->add_option("--model_amplitude", cv.model_amplitude,
                     "R(0); 0 normalizes sigma to 1");
  cmd_cv->add_option("--eps", cv.eps_csv, "comma-separated epsilon ladder");
  cmd_cv->add_option("--realizations", cv.realizations, "Monte-Carlo ensemble size");
  cmd_cv->add_option("--seed", cv.seed, "master seed");
  cmd_cv->add_option("--threads", cv.threads, "worker threads (0 = all cores)");
  cmd_cv->add_flag("--no-coupling-ratio", cv.no_coupling_ratio,
                   "skip the independent-noise comparison");
  cmd_cv->add_flag("--sentinel", cv.sentinel, "run the halved-h bias sentinel");
  cmd_cv->add_option("--out", cv.out, "report path");
  cmd_cv->add_option("--samples-out", cv.samples_out, "raw squared errors CSV");
  cmd_cv->add_option("--potential-out", cv.potential_out, "potential snapshot CSV");
  cmd_cv->add_option("--trajectory-out", cv.trajectory_out, "trajectory CSV");

  ChaosVerifyArgs ch;
  auto* cmd_ch = app.add_subcommand(
      "chaos-verify", "pairing calculus, Hu-Meyer and orthogonality property suite");
  cmd_ch->add_option("--max-n", ch.max_n, "largest chaos order (<= 4)");
  cmd_ch->add_option("--mc-samples", ch.mc_samples, "Monte-Carlo samples for Isserlis");
  cmd_ch->add_option("--mc-realizations", ch.mc_realizations,
                     "noise realizations for orthogonality");
  cmd_ch->add_option("--seed", ch.seed, "master seed");
  cmd_ch->add_option("--out", ch.out, "report path");

  SimplexArgs sx;
  auto* cmd_sx = app.add_subcommand(
      "simplex", "closed-form vs quadrature simplex integrals and bound scans");
  cmd_sx->add_option("--n", sx.n, "integral order (<= 3)");
  cmd_sx->add_option("--alpha", sx.alpha, "singularity exponent in (0,1)");
  cmd_sx->add_option("--t", sx.t, "outer time");
  cmd_sx->add_option("--tol", sx.tol, "closed-vs-quadrature tolerance");
  cmd_sx->add_option("--scan-max", sx.scan_max, "bound-scan extent in n, m");
  cmd_sx->add_option("--out", sx.out, "report path");
  cmd_sx->add_option("--scan-out", sx.scan_out, "bound-scan CSV path");

  MepsArgs me;
  auto* cmd_me = app.add_subcommand(
      "m-epsilon", "coupling-error functional decay rate in epsilon");
  cmd_me->add_option("--m", me.m, "even operator order")->required();
  cmd_me->add_option("--d", me.d, "space dimension")->required();
  cmd_me->add_option("--L", me.L, "box side");
  cmd_me->add_option("--N", me.N, "points per axis");
  cmd_me->add_option("--T", me.T, "time horizon of the sup");
  cmd_me->add_option("--kind", me.kind, "correlation kind");
  cmd_me->add_option("--ell", me.ell, "correlation length");
  cmd_me->add_option("--amplitude", me.amplitude, "R(0)");
  cmd_me->add_option("--eps", me.eps_csv, "comma-separated epsilon ladder");
  cmd_me->add_option("--out", me.out, "report path");
  cmd_me->add_option("--csv-out", me.csv_out, "table CSV path");

  int rc = kExitOk;
  cmd_gb->callback([&] { rc = run_green_bounds(gb); });
  cmd_cv->callback([&] {
    if (!cv.config_path.empty())
      apply_converge_config(
          cv, [&](const char* flag) { return cmd_cv->count(flag) > 0; });
    rc = run_converge(cv);
  });
  cmd_ch->callback([&] { rc = run_chaos_verify(ch); });
  cmd_sx->callback([&] { rc = run_simplex(sx); });
  cmd_me->callback([&] { rc = run_m_epsilon(me); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitContract;
  } catch (const contract_error& e) {
    std::fprintf(stderr, "contract violation: %s\n", e.what());
    return kExitContract;
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumeric;
  }
  return rc;
}
