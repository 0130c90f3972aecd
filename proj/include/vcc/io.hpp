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

#include <string>

#include "vcc/analysis.hpp"
#include "vcc/scenario.hpp"

namespace vcc {

/// Scalars a finished run reports; all result fields are recomputable from
/// the emitted CSVs.
struct RunReport {
  std::string name;
  std::string config_hash;
  std::uint64_t seed = 0;
  int horizon = 0;
  int n = 0;
  int r = 0;

  double final_diameter = 0.0;
  double diameter_threshold = 1e-3;
  int steps_to_threshold = -1;  // -1: never crossed within the horizon
  int velocity_violations = 0;

  bool analysis_ran = false;
  double fit_C = 0.0;
  double fit_mu = 0.0;
  double fit_r2 = 0.0;
  bool fit_degenerate = true;
  bool fit_mu_valid = false;
  bool fit_envelope_dominates = false;
  double fit_envelope_multiplier = 1.0;
  bool positive_column_found = false;
  int column_h = 0;  // 1-based in reports, 0 when not found
  double mu_hat = 0.0;
  int n_hat = 0;
  double dual_max_deviation = 0.0;
  double max_factor_row_sum_err = 0.0;
  double max_gamma_row_sum_err = 0.0;
  bool minmax_monotone_ok = true;
  bool range_contraction_ok = true;
  int e_bound_violations = 0;
  int truncation_events = 0;

  double wall_clock_seconds = 0.0;
};

int count_velocity_violations(const Trajectory& traj, const std::vector<ConstraintSet>& sets);
int steps_to_threshold(const Trajectory& traj, double threshold);

RunReport make_run_report(const Scenario& scenario, const Trajectory& traj,
                          const AnalysisResult* analysis, double wall_clock_seconds);

/// trajectory.csv: one row per (k, agent, axis) with 17-significant-digit
/// decimals, bit-faithful on round trip.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path);

/// analysis.csv: flat (kind, index, value) records of the per-step and
/// per-window diagnostics.
void write_analysis_csv(const std::string& path, const AnalysisResult& analysis,
                        const std::string& hash);

/// plotdata/: positions.csv, diameter.csv, log_diameter.csv series.
void write_plotdata(const std::string& dir, const Trajectory& traj);

nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);
void write_summary(const std::string& path, const RunReport& report);
RunReport read_summary(const std::string& path);

/// Formats a double with 17 significant digits (exact round trip).
std::string format_double(double value);

}  // namespace vcc
