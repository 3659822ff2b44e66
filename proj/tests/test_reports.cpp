#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "stratlab/report.hpp"

using namespace stratlab;
using Catch::Approx;

TEST_CASE("kernel bounds report serializes to the documented schema", "[reports]") {
  auto grid = GridSpec::make(1, 40.0, 256);
  auto mesh = log_time_mesh(grid, 2, 0.5, 16);
  KernelBoundsReport rep = kernel_bounds(2, grid, mesh);
  json j = to_json(rep);
  for (const char* key :
       {"m", "d", "L", "N", "l1_sup", "l2_scaled_sup", "linf_scaled_sup", "times"})
    REQUIRE(j.contains(key));
  REQUIRE(j["m"] == 2);
  REQUIRE(j["d"] == 1);
  REQUIRE(j["N"] == 256);
  REQUIRE(j["times"].size() == 16);
  REQUIRE(j["l1_sup"].get<double>() == Approx(1.0).epsilon(1e-5));
}

TEST_CASE("digest is deterministic and content-sensitive", "[reports]") {
  REQUIRE(fnv1a_digest("abc") == fnv1a_digest("abc"));
  REQUIRE(fnv1a_digest("abc") != fnv1a_digest("abd"));
  REQUIRE(fnv1a_digest("abc").size() == 16);
}

TEST_CASE("manifest round trip", "[reports]") {
  RunManifest m;
  m.subcommand = "converge";
  m.config_digest = "00ff";
  m.master_seed = 99;
  m.wall_clock_seconds = 1.25;
  m.outputs = {"a.json", "b.csv"};
  json j = to_json(m);
  REQUIRE(j["subcommand"] == "converge");
  REQUIRE(j["master_seed"] == 99);
  REQUIRE(j["outputs"].size() == 2);
  REQUIRE(j["version"] == kVersion);
}

TEST_CASE("csv writers produce the documented columns", "[reports]") {
  std::string dir = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp");
  auto grid = GridSpec::make(1, 8.0, 16);
  Field f(grid, 1.5);
  std::string fpath = dir + "/stratlab_test_field.csv";
  write_field_csv(fpath, f);
  std::ifstream in(fpath);
  std::string header;
  std::getline(in, header);
  REQUIRE(header == "cell,value");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  REQUIRE(rows == 16);
  std::remove(fpath.c_str());

  Trajectory traj;
  traj.times = {0.0, 0.5};
  traj.states = {f, f};
  std::string tpath = dir + "/stratlab_test_traj.csv";
  write_trajectory_csv(tpath, traj);
  std::ifstream tin(tpath);
  std::getline(tin, header);
  REQUIRE(header == "time,cell,value");
  rows = 0;
  while (std::getline(tin, line)) ++rows;
  REQUIRE(rows == 32);
  std::remove(tpath.c_str());
}

TEST_CASE("convergence report JSON carries the fit and provenance", "[reports]") {
  ConvergenceReport rep;
  rep.eps_values = {0.4, 0.2};
  rep.mse = {0.1, 0.05};
  rep.std_errors = {0.01, 0.005};
  rep.mse_mid = {0.04, 0.02};
  rep.fitted_slope = 1.0;
  rep.slope_ci_low = 0.8;
  rep.slope_ci_high = 1.2;
  rep.n_realizations = 100;
  rep.master_seed = 7;
  rep.conclusive = true;
  rep.config_digest = "deadbeef00000000";
  json j = to_json(rep);
  REQUIRE(j["fitted_slope"] == 1.0);
  REQUIRE(j["slope_ci"][0] == 0.8);
  REQUIRE(j["n_realizations"] == 100);
  REQUIRE(j["config_digest"] == "deadbeef00000000");
  REQUIRE(j["conclusive"] == true);
}
