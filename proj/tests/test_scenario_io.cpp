// Copyright 2026 The vccsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "vcc/analysis.hpp"
#include "vcc/io.hpp"
#include "vcc/scenario.hpp"

using namespace vcc;
namespace fs = std::filesystem;

namespace {

std::string temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "vcc_io_test";
  fs::create_directories(dir);
  return dir.string();
}

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("bundled config loads and passes every assumption check") {
  const ScenarioConfig cfg = load_config(std::string(VCC_SOURCE_DIR) +
                                         "/scenarios/four_agent_cycle.json");
  // The file and the built-in factory describe the same experiment.
  CHECK(config_to_json(cfg) == config_to_json(make_cycle_example_config()));
  CHECK(config_hash(cfg) == config_hash(make_cycle_example_config()));

  const Scenario scenario = materialize(cfg);
  const ValidationReport report = validate_scenario(scenario);
  CHECK(report.all_passed);
  CHECK_NOTHROW(require_valid(scenario, report));
}

TEST_CASE("config validation failures") {
  SUBCASE("infeasible initial gain") {
    ScenarioConfig cfg = make_cycle_example_config();
    for (auto& a : cfg.agents) a.p0 = 6.0;  // p0 T = 1.2
    CHECK_THROWS_AS(materialize(cfg), GainOutOfRange);
    CHECK_THROWS_AS(materialize(cfg), ValidationError);  // same throw, base type
  }

  SUBCASE("schedule that never connects two agents") {
    ScenarioConfig cfg = make_disconnected_scenario();
    cfg.allow_violations = false;
    const Scenario scenario = materialize(cfg);
    const ValidationReport report = validate_scenario(scenario);
    CHECK_FALSE(report.all_passed);
    bool connectivity_failed = false;
    for (const auto& check : report.checks) {
      if (check.name == "joint_connectivity") connectivity_failed = !check.passed;
    }
    CHECK(connectivity_failed);
    CHECK_THROWS_AS(require_valid(scenario, report), ValidationError);

    cfg.allow_violations = true;
    const Scenario waived = materialize(cfg);
    CHECK_NOTHROW(require_valid(waived, validate_scenario(waived)));
  }

  SUBCASE("malformed json reports a location") {
    const std::string path = temp_dir() + "/broken.json";
    std::ofstream(path) << "{ \"n\": 4, ";
    CHECK_THROWS_AS(load_config(path), ParseError);
    CHECK_THROWS_AS(load_config(temp_dir() + "/missing.json"), ParseError);
  }

  SUBCASE("agent count mismatch") {
    nlohmann::json j = config_to_json(make_cycle_example_config());
    j["n"] = 5;
    CHECK_THROWS_AS(config_from_json(j), ParseError);
  }
}

TEST_CASE("config hash separates configs") {
  const ScenarioConfig base = make_cycle_example_config();
  const std::string h = config_hash(base);
  CHECK(h.size() == 16);
  CHECK(config_hash(base) == h);

  ScenarioConfig seed = base;
  seed.seed = 2;
  ScenarioConfig horizon = base;
  horizon.horizon = 601;
  ScenarioConfig weight = base;
  weight.schedule.snapshots[0].edges[0].weight = 0.51;
  ScenarioConfig p0 = base;
  p0.agents[2].p0 = 1.4;
  for (const auto& variant : {seed, horizon, weight, p0}) {
    CHECK(config_hash(variant) != h);
  }
}

TEST_CASE("trajectory csv round trip is exact") {
  ScenarioConfig cfg = make_cycle_example_config();
  cfg.horizon = 37;
  const Scenario scenario = materialize(cfg);
  const Trajectory traj = run_scenario(scenario);

  const std::string path = temp_dir() + "/traj.csv";
  write_trajectory_csv(path, traj);
  const Trajectory back = read_trajectory_csv(path);

  CHECK(back.config_hash == traj.config_hash);
  CHECK(back.horizon == traj.horizon);
  CHECK(back.n == traj.n);
  CHECK(back.r == traj.r);
  CHECK(back.T == traj.T);
  REQUIRE(back.steps.size() == traj.steps.size());
  for (std::size_t k = 0; k < traj.steps.size(); ++k) {
    CHECK(back.steps[k].x == traj.steps[k].x);
    CHECK(back.steps[k].v == traj.steps[k].v);
    CHECK(back.steps[k].e == traj.steps[k].e);
    CHECK(back.steps[k].p == traj.steps[k].p);
    CHECK(back.steps[k].b == traj.steps[k].b);
    CHECK(back.steps[k].diameter == traj.steps[k].diameter);
  }
}

TEST_CASE("identical configs give byte-identical artifacts") {
  ScenarioConfig cfg = make_cycle_example_config();
  cfg.horizon = 25;
  const Scenario scenario = materialize(cfg);

  const std::string p1 = temp_dir() + "/a.csv";
  const std::string p2 = temp_dir() + "/b.csv";
  write_trajectory_csv(p1, run_scenario(scenario));
  write_trajectory_csv(p2, run_scenario(materialize(cfg)));
  CHECK(file_bytes(p1) == file_bytes(p2));
}

TEST_CASE("summary scalars are recomputable from the emitted csvs") {
  ScenarioConfig cfg = make_cycle_example_config();
  cfg.horizon = 120;
  cfg.analysis.rate_fit = false;  // 120 steps cover no full certificate block
  const Scenario scenario = materialize(cfg);
  const Trajectory traj = run_scenario(scenario);
  const AnalysisResult analysis = analyze_scenario(scenario, traj);
  const RunReport report = make_run_report(scenario, traj, &analysis, 0.0);

  const std::string dir = temp_dir();
  write_trajectory_csv(dir + "/t.csv", traj);
  write_summary(dir + "/summary.json", report);

  Trajectory parsed = read_trajectory_csv(dir + "/t.csv");
  parsed.d = scenario.gains.d;  // caps derive from the config, not the csv

  const RunReport loaded = read_summary(dir + "/summary.json");
  CHECK(loaded.config_hash == report.config_hash);
  CHECK(loaded.final_diameter == parsed.steps.back().diameter);
  CHECK(loaded.steps_to_threshold == steps_to_threshold(parsed, loaded.diameter_threshold));
  CHECK(loaded.velocity_violations == count_velocity_violations(parsed, scenario.sets));

  const AnalysisResult redo = analyze_scenario(scenario, parsed);
  CHECK(std::abs(loaded.dual_max_deviation - redo.dual_max_deviation) <= 1e-12);
  CHECK(std::abs(loaded.max_factor_row_sum_err - redo.max_factor_row_sum_err) <= 1e-12);
  CHECK(std::abs(loaded.max_gamma_row_sum_err - redo.max_gamma_row_sum_err) <= 1e-12);
  CHECK(loaded.e_bound_violations == redo.e_bound_violations);
  CHECK(loaded.truncation_events == redo.truncation_events);
}

TEST_CASE("plotdata series") {
  ScenarioConfig cfg = make_cycle_example_config();
  cfg.horizon = 10;
  const Trajectory traj = run_scenario(materialize(cfg));
  const std::string dir = temp_dir() + "/plots";
  write_plotdata(dir, traj);
  CHECK(fs::exists(dir + "/positions.csv"));
  CHECK(fs::exists(dir + "/diameter.csv"));
  CHECK(fs::exists(dir + "/log_diameter.csv"));

  // diameter.csv has horizon + 1 data rows.
  std::ifstream in(dir + "/diameter.csv");
  std::string line;
  int rows = -1;  // discount the header
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 11);
}

TEST_CASE("analysis csv is written with the config hash") {
  ScenarioConfig cfg = make_unconstrained_scenario(9);
  cfg.horizon = 80;
  const Scenario scenario = materialize(cfg);
  const Trajectory traj = run_scenario(scenario);
  const AnalysisResult analysis = analyze_scenario(scenario, traj);
  const std::string path = temp_dir() + "/analysis.csv";
  write_analysis_csv(path, analysis, traj.config_hash);
  const std::string contents = file_bytes(path);
  CHECK(contents.find(traj.config_hash) != std::string::npos);
  CHECK(contents.find("factor_row_sum_err") != std::string::npos);
  CHECK(contents.find("dual_deviation") != std::string::npos);
}
