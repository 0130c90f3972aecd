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

#include "vcc/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace vcc {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

int count_velocity_violations(const Trajectory& traj, const std::vector<ConstraintSet>& sets) {
  int violations = 0;
  for (const auto& rec : traj.steps) {
    for (int i = 0; i < traj.n; ++i) {
      if (!sets[static_cast<std::size_t>(i)].contains(rec.v.row(i).transpose())) ++violations;
    }
  }
  return violations;
}

int steps_to_threshold(const Trajectory& traj, double threshold) {
  for (const auto& rec : traj.steps) {
    if (rec.diameter < threshold) return rec.k;
  }
  return -1;
}

RunReport make_run_report(const Scenario& scenario, const Trajectory& traj,
                          const AnalysisResult* analysis, double wall_clock_seconds) {
  RunReport report;
  report.name = scenario.cfg.name;
  report.config_hash = traj.config_hash;
  report.seed = scenario.cfg.seed;
  report.horizon = traj.horizon;
  report.n = traj.n;
  report.r = traj.r;
  report.final_diameter = traj.steps.back().diameter;
  report.steps_to_threshold = steps_to_threshold(traj, report.diameter_threshold);
  report.velocity_violations = count_velocity_violations(traj, scenario.sets);
  report.wall_clock_seconds = wall_clock_seconds;
  if (analysis) {
    report.analysis_ran = true;
    report.fit_C = analysis->fit.C;
    report.fit_mu = analysis->fit.mu;
    report.fit_r2 = analysis->fit.r2;
    report.fit_degenerate = analysis->fit.degenerate;
    report.fit_mu_valid = analysis->fit.mu_valid;
    report.fit_envelope_dominates = analysis->fit.envelope_dominates;
    report.fit_envelope_multiplier = analysis->fit.envelope_multiplier;
    report.positive_column_found = analysis->positive_column.found;
    report.column_h = analysis->positive_column.found ? analysis->positive_column.column + 1 : 0;
    report.mu_hat = analysis->positive_column.mu_hat;
    report.n_hat = analysis->n_hat;
    report.dual_max_deviation = analysis->dual_max_deviation;
    report.max_factor_row_sum_err = analysis->max_factor_row_sum_err;
    report.max_gamma_row_sum_err = analysis->max_gamma_row_sum_err;
    report.minmax_monotone_ok = analysis->minmax_monotone_ok;
    report.range_contraction_ok = analysis->range_contraction_ok;
    report.e_bound_violations = analysis->e_bound_violations;
    report.truncation_events = analysis->truncation_events;
  }
  return report;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "# config_hash=" << traj.config_hash << " T=" << format_double(traj.T) << "\n";
  out << "k,agent,axis,x,v,e,p,b\n";
  for (const auto& rec : traj.steps) {
    for (int i = 0; i < traj.n; ++i) {
      for (int c = 0; c < traj.r; ++c) {
        out << rec.k << ',' << i + 1 << ',' << c + 1 << ',' << format_double(rec.x(i, c)) << ','
            << format_double(rec.v(i, c)) << ',' << format_double(rec.e[i]) << ','
            << format_double(rec.p[i]) << ',' << format_double(rec.b[i]) << "\n";
      }
    }
  }
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  Trajectory traj;

  struct Row {
    int k, agent, axis;
    double x, v, e, p, b;
  };
  std::vector<Row> rows;
  int max_k = -1, max_agent = 0, max_axis = 0;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("config_hash=");
      if (pos != std::string::npos) {
        std::istringstream hs(line.substr(pos + 12));
        hs >> traj.config_hash;
      }
      const auto tpos = line.find(" T=");
      if (tpos != std::string::npos) traj.T = std::strtod(line.c_str() + tpos + 3, nullptr);
      continue;
    }
    if (line.rfind("k,", 0) == 0) continue;  // header
    Row row;
    char* cur = line.data();
    char* end = nullptr;
    const auto next_field = [&]() -> double {
      const double v = std::strtod(cur, &end);
      if (end == cur) throw ParseError(path + ":" + std::to_string(lineno) + ": bad number");
      cur = (*end == ',') ? end + 1 : end;
      return v;
    };
    row.k = static_cast<int>(next_field());
    row.agent = static_cast<int>(next_field());
    row.axis = static_cast<int>(next_field());
    row.x = next_field();
    row.v = next_field();
    row.e = next_field();
    row.p = next_field();
    row.b = next_field();
    max_k = std::max(max_k, row.k);
    max_agent = std::max(max_agent, row.agent);
    max_axis = std::max(max_axis, row.axis);
    rows.push_back(row);
  }
  if (rows.empty()) throw ParseError(path + ": no data rows");

  traj.horizon = max_k;
  traj.n = max_agent;
  traj.r = max_axis;
  traj.steps.resize(static_cast<std::size_t>(max_k) + 1);
  for (int k = 0; k <= max_k; ++k) {
    StepRecord& rec = traj.steps[static_cast<std::size_t>(k)];
    rec.k = k;
    rec.x.resize(traj.n, traj.r);
    rec.v.resize(traj.n, traj.r);
    rec.e.resize(traj.n);
    rec.p.resize(traj.n);
    rec.b.resize(traj.n);
  }
  for (const Row& row : rows) {
    StepRecord& rec = traj.steps[static_cast<std::size_t>(row.k)];
    rec.x(row.agent - 1, row.axis - 1) = row.x;
    rec.v(row.agent - 1, row.axis - 1) = row.v;
    rec.e[row.agent - 1] = row.e;
    rec.p[row.agent - 1] = row.p;
    rec.b[row.agent - 1] = row.b;
  }
  for (auto& rec : traj.steps) rec.diameter = position_diameter(rec.x);
  return traj;
}

void write_analysis_csv(const std::string& path, const AnalysisResult& analysis,
                        const std::string& hash) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "# config_hash=" << hash << "\n";
  out << "kind,index,value\n";
  const auto series = [&](const char* kind, const std::vector<double>& values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      out << kind << ',' << k << ',' << format_double(values[k]) << "\n";
    }
  };
  series("factor_row_sum_err", analysis.factor_row_sum_err_log);
  series("gamma_row_sum_err", analysis.gamma_row_sum_err_log);
  series("dual_deviation", analysis.dual_deviation_log);
  series("window_range", analysis.window_ranges);
  for (std::size_t b = 0; b < analysis.positive_column.blocks.size(); ++b) {
    const auto& cert = analysis.positive_column.blocks[b];
    out << "block_column," << b << ',' << cert.column + 1 << "\n";
    out << "block_mu," << b << ',' << format_double(cert.min_entry) << "\n";
  }
}

void write_plotdata(const std::string& dir, const Trajectory& traj) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir + "/positions.csv");
    out << "k,agent,axis,x\n";
    for (const auto& rec : traj.steps) {
      for (int i = 0; i < traj.n; ++i) {
        for (int c = 0; c < traj.r; ++c) {
          out << rec.k << ',' << i + 1 << ',' << c + 1 << ',' << format_double(rec.x(i, c))
              << "\n";
        }
      }
    }
  }
  {
    std::ofstream out(dir + "/diameter.csv");
    out << "k,diameter\n";
    for (const auto& rec : traj.steps) {
      out << rec.k << ',' << format_double(rec.diameter) << "\n";
    }
  }
  {
    std::ofstream out(dir + "/log_diameter.csv");
    out << "k,log10_diameter\n";
    for (const auto& rec : traj.steps) {
      if (rec.diameter > 0.0) {
        out << rec.k << ',' << format_double(std::log10(rec.diameter)) << "\n";
      }
    }
  }
}

nlohmann::json report_to_json(const RunReport& report) {
  nlohmann::json j;
  j["name"] = report.name;
  j["config_hash"] = report.config_hash;
  j["seed"] = report.seed;
  j["horizon"] = report.horizon;
  j["n"] = report.n;
  j["r"] = report.r;
  j["final_diameter"] = report.final_diameter;
  j["diameter_threshold"] = report.diameter_threshold;
  j["steps_to_threshold"] = report.steps_to_threshold;
  j["velocity_violations"] = report.velocity_violations;
  j["analysis_ran"] = report.analysis_ran;
  if (report.analysis_ran) {
    j["fit_C"] = report.fit_C;
    j["fit_mu"] = report.fit_mu;
    j["fit_r2"] = report.fit_r2;
    j["fit_degenerate"] = report.fit_degenerate;
    j["fit_mu_valid"] = report.fit_mu_valid;
    j["fit_envelope_dominates"] = report.fit_envelope_dominates;
    j["fit_envelope_multiplier"] = report.fit_envelope_multiplier;
    j["positive_column_found"] = report.positive_column_found;
    j["column_h"] = report.column_h;
    j["mu_hat"] = report.mu_hat;
    j["n_hat"] = report.n_hat;
    j["dual_max_deviation"] = report.dual_max_deviation;
    j["max_factor_row_sum_err"] = report.max_factor_row_sum_err;
    j["max_gamma_row_sum_err"] = report.max_gamma_row_sum_err;
    j["minmax_monotone_ok"] = report.minmax_monotone_ok;
    j["range_contraction_ok"] = report.range_contraction_ok;
    j["e_bound_violations"] = report.e_bound_violations;
    j["truncation_events"] = report.truncation_events;
  }
  j["wall_clock_seconds"] = report.wall_clock_seconds;
  return j;
}

RunReport report_from_json(const nlohmann::json& j) {
  RunReport report;
  report.name = j.value("name", std::string());
  report.config_hash = j.value("config_hash", std::string());
  report.seed = j.value("seed", std::uint64_t{0});
  report.horizon = j.value("horizon", 0);
  report.n = j.value("n", 0);
  report.r = j.value("r", 0);
  report.final_diameter = j.value("final_diameter", 0.0);
  report.diameter_threshold = j.value("diameter_threshold", 1e-3);
  report.steps_to_threshold = j.value("steps_to_threshold", -1);
  report.velocity_violations = j.value("velocity_violations", 0);
  report.analysis_ran = j.value("analysis_ran", false);
  if (report.analysis_ran) {
    report.fit_C = j.value("fit_C", 0.0);
    report.fit_mu = j.value("fit_mu", 0.0);
    report.fit_r2 = j.value("fit_r2", 0.0);
    report.fit_degenerate = j.value("fit_degenerate", true);
    report.fit_mu_valid = j.value("fit_mu_valid", false);
    report.fit_envelope_dominates = j.value("fit_envelope_dominates", false);
    report.fit_envelope_multiplier = j.value("fit_envelope_multiplier", 1.0);
    report.positive_column_found = j.value("positive_column_found", false);
    report.column_h = j.value("column_h", 0);
    report.mu_hat = j.value("mu_hat", 0.0);
    report.n_hat = j.value("n_hat", 0);
    report.dual_max_deviation = j.value("dual_max_deviation", 0.0);
    report.max_factor_row_sum_err = j.value("max_factor_row_sum_err", 0.0);
    report.max_gamma_row_sum_err = j.value("max_gamma_row_sum_err", 0.0);
    report.minmax_monotone_ok = j.value("minmax_monotone_ok", true);
    report.range_contraction_ok = j.value("range_contraction_ok", true);
    report.e_bound_violations = j.value("e_bound_violations", 0);
    report.truncation_events = j.value("truncation_events", 0);
  }
  report.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  return report;
}

void write_summary(const std::string& path, const RunReport& report) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << report_to_json(report).dump(2) << "\n";
}

RunReport read_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return report_from_json(j);
}

}  // namespace vcc
