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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcc/protocol.hpp"

namespace vcc {

/// Serializable constraint-set descriptor (the JSON shape grammar).
struct ShapeDesc {
  enum class Kind { Ball, Box, Union, Intersection };
  Kind kind = Kind::Ball;
  double radius = 1.0;                 // Ball
  Eigen::VectorXd lower, upper;        // Box
  std::vector<ShapeDesc> members;      // Union / Intersection

  static ShapeDesc ball(double radius);
  static ShapeDesc box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static ShapeDesc join(std::vector<ShapeDesc> members);       // union
  static ShapeDesc meet(std::vector<ShapeDesc> members);       // intersection
};

ConstraintSet build_set(const ShapeDesc& desc, int dimension);

struct EdgeSpec {
  int src = 0;  // 0-based internally; 1-based in config files
  int dst = 0;
  double weight = 0.0;
  int delay = 0;
};

struct SnapshotSpec {
  std::vector<EdgeSpec> edges;
};

struct ScheduleSpec {
  enum class Kind { Periodic, SeededRandom };
  Kind kind = Kind::Periodic;
  std::vector<SnapshotSpec> snapshots;  // Periodic: rotation list
  int window_length = 0;                // 0 means "use eta"
  int eta = 1;
  double mu_c = 1e-3;
  int delay_bound = 0;
  int extra_edges = 0;      // SeededRandom
  double weight_min = 0.0;  // SeededRandom draw range (0 means "mu_c")
  double weight_max = 1.0;
};

struct AgentSpec {
  bool has_x0 = false;
  bool has_v0 = false;
  Eigen::VectorXd x0;
  Eigen::VectorXd v0;
  double p0 = 1.0;
  ShapeDesc set;
};

struct AnalysisSpec {
  bool dual_sim = true;
  bool certificate_checks = true;
  bool rate_fit = true;
  int n_hat = 0;  // 0 means the default 4 n (M+1)
};

/// Complete experiment description; everything a run needs is derived
/// deterministically from this plus the seed.
struct ScenarioConfig {
  int schema_version = 1;
  std::string name = "scenario";
  int n = 0;
  int r = 1;
  double T = 0.1;
  int horizon = 0;
  std::uint64_t seed = 1;
  std::string gain_policy = "b_prev";
  double safety_margin = 0.02;
  std::vector<AgentSpec> agents;
  ScheduleSpec schedule;
  AnalysisSpec analysis;
  std::string out_dir = "out";
  bool allow_violations = false;
};

nlohmann::json config_to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const nlohmann::json& j);

/// Loads and structurally checks a config file.
/// Throws ParseError with a location on malformed input.
ScenarioConfig load_config(const std::string& path);
void save_config(const ScenarioConfig& cfg, const std::string& path);

/// FNV-1a hash of the canonical serialized config, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

/// A config with every derived object constructed: sets, schedule, gains,
/// seeded initial conditions.
struct Scenario {
  ScenarioConfig cfg;
  std::vector<ConstraintSet> sets;
  GraphSchedule schedule;
  GainDesign gains;
  Eigen::MatrixXd x0;  // n x r
  Eigen::MatrixXd v0;  // n x r, raw (clamped into the sets at run start)
  GainPolicy policy;
  std::string hash;
};

Scenario materialize(const ScenarioConfig& cfg);

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_passed = true;
  std::vector<RhoBounds> rho;  // per agent, when the reach check passed
};

/// Runs the assumption pre-checks: constraint-set reach positivity, gain
/// feasibility, graph invariants, and joint connectivity over the horizon.
ValidationReport validate_scenario(const Scenario& scenario);

/// Throws ValidationError naming the first failed check unless the config
/// waives violations.
void require_valid(const Scenario& scenario, const ValidationReport& report);

/// Deterministic closed-loop run over the horizon. Records states for
/// k = 0..horizon; the record at the final step carries the controls the
/// next step would use.
Trajectory run_scenario(const Scenario& scenario);

/// The bundled 4-agent reproduction scenario: single rotating edges
/// (1->2),(2->3),(3->4),(4->1) of weight 0.5, delays {1,2,3,3} steps,
/// T = 0.2, p0 = 1.5, V = Ball(1) union Box([-0.5,0],[0.5,1.5]).
ScenarioConfig make_cycle_example_config();

/// Deterministic family of randomized jointly-connected scenarios
/// (n <= 8, M <= 5) used by the verification suite.
ScenarioConfig make_random_scenario(std::uint64_t master_seed, int index);

/// Control scenario whose schedule never connects agents 3 and 4;
/// violations are pre-waived.
ScenarioConfig make_disconnected_scenario();

/// Jointly-connected scenario with a constraint ball so large that no
/// truncation ever occurs.
ScenarioConfig make_unconstrained_scenario(std::uint64_t seed);

}  // namespace vcc
