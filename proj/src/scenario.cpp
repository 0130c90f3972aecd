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

#include "vcc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vcc/rng.hpp"

namespace vcc {

using nlohmann::json;

ShapeDesc ShapeDesc::ball(double radius) {
  ShapeDesc d;
  d.kind = Kind::Ball;
  d.radius = radius;
  return d;
}

ShapeDesc ShapeDesc::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  ShapeDesc d;
  d.kind = Kind::Box;
  d.lower = std::move(lower);
  d.upper = std::move(upper);
  return d;
}

ShapeDesc ShapeDesc::join(std::vector<ShapeDesc> members) {
  ShapeDesc d;
  d.kind = Kind::Union;
  d.members = std::move(members);
  return d;
}

ShapeDesc ShapeDesc::meet(std::vector<ShapeDesc> members) {
  ShapeDesc d;
  d.kind = Kind::Intersection;
  d.members = std::move(members);
  return d;
}

ConstraintSet build_set(const ShapeDesc& desc, int dimension) {
  switch (desc.kind) {
    case ShapeDesc::Kind::Ball:
      return ConstraintSet::ball(desc.radius, dimension);
    case ShapeDesc::Kind::Box:
      if (desc.lower.size() != dimension) {
        throw ValidationError("box bounds do not match the state dimension");
      }
      return ConstraintSet::axis_box(desc.lower, desc.upper);
    case ShapeDesc::Kind::Union:
    case ShapeDesc::Kind::Intersection: {
      std::vector<ConstraintSet> members;
      members.reserve(desc.members.size());
      for (const auto& m : desc.members) members.push_back(build_set(m, dimension));
      return desc.kind == ShapeDesc::Kind::Union
                 ? ConstraintSet::set_union(std::move(members))
                 : ConstraintSet::set_intersection(std::move(members));
    }
  }
  throw ValidationError("unknown shape kind");
}

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

json shape_to_json(const ShapeDesc& d) {
  json j;
  switch (d.kind) {
    case ShapeDesc::Kind::Ball:
      j["shape"] = "ball";
      j["radius"] = d.radius;
      break;
    case ShapeDesc::Kind::Box:
      j["shape"] = "box";
      j["lower"] = vector_to_json(d.lower);
      j["upper"] = vector_to_json(d.upper);
      break;
    case ShapeDesc::Kind::Union:
    case ShapeDesc::Kind::Intersection:
      j["shape"] = d.kind == ShapeDesc::Kind::Union ? "union" : "intersection";
      j["members"] = json::array();
      for (const auto& m : d.members) j["members"].push_back(shape_to_json(m));
      break;
  }
  return j;
}

ShapeDesc shape_from_json(const json& j) {
  if (!j.is_object() || !j.contains("shape")) {
    throw ParseError("set descriptor: expected an object with a 'shape' field");
  }
  const std::string kind = j.at("shape").get<std::string>();
  if (kind == "ball") return ShapeDesc::ball(j.at("radius").get<double>());
  if (kind == "box") {
    return ShapeDesc::box(vector_from_json(j.at("lower"), "box.lower"),
                          vector_from_json(j.at("upper"), "box.upper"));
  }
  if (kind == "union" || kind == "intersection") {
    std::vector<ShapeDesc> members;
    for (const auto& m : j.at("members")) members.push_back(shape_from_json(m));
    return kind == "union" ? ShapeDesc::join(std::move(members))
                           : ShapeDesc::meet(std::move(members));
  }
  throw ParseError("set descriptor: unknown shape '" + kind + "'");
}

}  // namespace

json config_to_json(const ScenarioConfig& cfg) {
  json j;
  j["schema_version"] = cfg.schema_version;
  j["name"] = cfg.name;
  j["n"] = cfg.n;
  j["r"] = cfg.r;
  j["T"] = cfg.T;
  j["horizon"] = cfg.horizon;
  j["seed"] = cfg.seed;
  j["gain_policy"] = cfg.gain_policy;
  j["safety_margin"] = cfg.safety_margin;
  j["allow_violations"] = cfg.allow_violations;
  j["out_dir"] = cfg.out_dir;

  json agents = json::array();
  for (const auto& a : cfg.agents) {
    json ja;
    if (a.has_x0) ja["x0"] = vector_to_json(a.x0);
    if (a.has_v0) ja["v0"] = vector_to_json(a.v0);
    ja["p0"] = a.p0;
    ja["set"] = shape_to_json(a.set);
    agents.push_back(ja);
  }
  j["agents"] = agents;

  json sched;
  sched["type"] = cfg.schedule.kind == ScheduleSpec::Kind::Periodic ? "periodic" : "seeded_random";
  sched["eta"] = cfg.schedule.eta;
  sched["mu_c"] = cfg.schedule.mu_c;
  sched["delay_bound"] = cfg.schedule.delay_bound;
  if (cfg.schedule.window_length > 0) sched["window_length"] = cfg.schedule.window_length;
  if (cfg.schedule.kind == ScheduleSpec::Kind::Periodic) {
    json snaps = json::array();
    for (const auto& s : cfg.schedule.snapshots) {
      json edges = json::array();
      for (const auto& e : s.edges) {
        edges.push_back(json{{"src", e.src + 1},
                             {"dst", e.dst + 1},
                             {"weight", e.weight},
                             {"delay", e.delay}});
      }
      snaps.push_back(json{{"edges", edges}});
    }
    sched["snapshots"] = snaps;
  } else {
    sched["extra_edges"] = cfg.schedule.extra_edges;
    sched["weight_min"] = cfg.schedule.weight_min;
    sched["weight_max"] = cfg.schedule.weight_max;
  }
  j["schedule"] = sched;

  json an;
  an["dual_sim"] = cfg.analysis.dual_sim;
  an["certificate_checks"] = cfg.analysis.certificate_checks;
  an["rate_fit"] = cfg.analysis.rate_fit;
  if (cfg.analysis.n_hat > 0) an["n_hat"] = cfg.analysis.n_hat;
  j["analysis"] = an;
  return j;
}

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig cfg;
  try {
    cfg.schema_version = j.value("schema_version", 1);
    if (cfg.schema_version != 1) {
      throw ParseError("unsupported schema_version " + std::to_string(cfg.schema_version));
    }
    cfg.name = j.value("name", std::string("scenario"));
    cfg.n = j.at("n").get<int>();
    cfg.r = j.value("r", 1);
    cfg.T = j.at("T").get<double>();
    cfg.horizon = j.at("horizon").get<int>();
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.gain_policy = j.value("gain_policy", std::string("b_prev"));
    cfg.safety_margin = j.value("safety_margin", 0.02);
    cfg.allow_violations = j.value("allow_violations", false);
    cfg.out_dir = j.value("out_dir", std::string("out"));

    const json& agents = j.at("agents");
    const auto parse_agent = [&](const json& ja) {
      AgentSpec a;
      if (ja.contains("x0")) {
        a.has_x0 = true;
        a.x0 = vector_from_json(ja.at("x0"), "agent.x0");
      }
      if (ja.contains("v0")) {
        a.has_v0 = true;
        a.v0 = vector_from_json(ja.at("v0"), "agent.v0");
      }
      a.p0 = ja.at("p0").get<double>();
      a.set = shape_from_json(ja.at("set"));
      return a;
    };
    if (agents.is_object()) {
      // One template applied to every agent.
      for (int i = 0; i < cfg.n; ++i) cfg.agents.push_back(parse_agent(agents));
    } else if (agents.is_array()) {
      for (const auto& ja : agents) cfg.agents.push_back(parse_agent(ja));
    } else {
      throw ParseError("'agents' must be an array or a template object");
    }
    if (static_cast<int>(cfg.agents.size()) != cfg.n) {
      throw ParseError("'agents' lists " + std::to_string(cfg.agents.size()) +
                       " entries for n = " + std::to_string(cfg.n));
    }

    const json& sched = j.at("schedule");
    const std::string type = sched.value("type", std::string("periodic"));
    cfg.schedule.eta = sched.at("eta").get<int>();
    cfg.schedule.mu_c = sched.at("mu_c").get<double>();
    cfg.schedule.delay_bound = sched.at("delay_bound").get<int>();
    cfg.schedule.window_length = sched.value("window_length", 0);
    if (type == "periodic") {
      cfg.schedule.kind = ScheduleSpec::Kind::Periodic;
      for (const auto& js : sched.at("snapshots")) {
        SnapshotSpec snap;
        for (const auto& je : js.at("edges")) {
          EdgeSpec e;
          e.src = je.at("src").get<int>() - 1;
          e.dst = je.at("dst").get<int>() - 1;
          e.weight = je.at("weight").get<double>();
          e.delay = je.at("delay").get<int>();
          snap.edges.push_back(e);
        }
        cfg.schedule.snapshots.push_back(std::move(snap));
      }
    } else if (type == "seeded_random") {
      cfg.schedule.kind = ScheduleSpec::Kind::SeededRandom;
      cfg.schedule.extra_edges = sched.value("extra_edges", 0);
      cfg.schedule.weight_min = sched.value("weight_min", 0.0);
      cfg.schedule.weight_max = sched.value("weight_max", 1.0);
    } else {
      throw ParseError("schedule.type must be 'periodic' or 'seeded_random'");
    }

    if (j.contains("analysis")) {
      const json& an = j.at("analysis");
      cfg.analysis.dual_sim = an.value("dual_sim", true);
      cfg.analysis.certificate_checks = an.value("certificate_checks", true);
      cfg.analysis.rate_fit = an.value("rate_fit", true);
      cfg.analysis.n_hat = an.value("n_hat", 0);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write config file: " + path);
  out << config_to_json(cfg).dump(2) << "\n";
}

std::string config_hash(const ScenarioConfig& cfg) {
  const std::string dump = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

namespace {

GraphSchedule build_schedule(const ScenarioConfig& cfg) {
  const ScheduleSpec& spec = cfg.schedule;
  const int window_length = spec.window_length > 0 ? spec.window_length : spec.eta;
  if (spec.kind == ScheduleSpec::Kind::Periodic) {
    std::vector<GraphSnapshot> snaps;
    for (const auto& s : spec.snapshots) {
      GraphSnapshot g = GraphSnapshot::empty(cfg.n);
      for (const auto& e : s.edges) g.add_edge(e.src, e.dst, e.weight, e.delay);
      snaps.push_back(std::move(g));
    }
    return GraphSchedule(std::move(snaps), window_length, spec.eta, spec.mu_c, spec.delay_bound);
  }
  const double weight_min = spec.weight_min > 0.0 ? spec.weight_min : spec.mu_c;
  return GraphSchedule::seeded_random(Rng::derive(cfg.seed, 0xA11CEULL), cfg.n, window_length,
                                      spec.eta, spec.mu_c, spec.delay_bound, spec.extra_edges,
                                      weight_min, spec.weight_max);
}

}  // namespace

Scenario materialize(const ScenarioConfig& cfg) {
  if (cfg.n < 1) throw ValidationError("n must be positive");
  if (cfg.r < 1) throw ValidationError("r must be positive");
  if (cfg.horizon < 0) throw ValidationError("horizon must be nonnegative");
  if (!(cfg.T > 0.0)) throw ValidationError("T must be positive");
  if (static_cast<int>(cfg.agents.size()) != cfg.n) {
    throw ValidationError("agent list does not match n");
  }

  Eigen::VectorXd p0(cfg.n);
  for (int i = 0; i < cfg.n; ++i) p0[i] = cfg.agents[i].p0;

  std::vector<ConstraintSet> sets;
  sets.reserve(cfg.agents.size());
  for (const auto& a : cfg.agents) sets.push_back(build_set(a.set, cfg.r));

  Eigen::MatrixXd x0(cfg.n, cfg.r);
  Eigen::MatrixXd v0 = Eigen::MatrixXd::Zero(cfg.n, cfg.r);
  for (int i = 0; i < cfg.n; ++i) {
    const AgentSpec& a = cfg.agents[i];
    if (a.has_x0) {
      if (a.x0.size() != cfg.r) throw ValidationError("x0 dimension mismatch");
      x0.row(i) = a.x0.transpose();
    } else {
      Rng rng(Rng::derive(cfg.seed, 1000 + static_cast<std::uint64_t>(i)));
      for (int c = 0; c < cfg.r; ++c) x0(i, c) = rng.uniform(-5.0, 5.0);
    }
    if (a.has_v0) {
      if (a.v0.size() != cfg.r) throw ValidationError("v0 dimension mismatch");
      v0.row(i) = a.v0.transpose();
    }
  }

  Scenario s{cfg,
             std::move(sets),
             build_schedule(cfg),
             design_initial_gains(cfg.T, p0, cfg.safety_margin),
             std::move(x0),
             std::move(v0),
             GainPolicy::by_name(cfg.gain_policy),
             config_hash(cfg)};
  return s;
}

ValidationReport validate_scenario(const Scenario& scenario) {
  ValidationReport report;
  const auto add = [&](const std::string& name, bool passed, const std::string& detail) {
    report.checks.push_back(CheckResult{name, passed, detail});
    report.all_passed = report.all_passed && passed;
  };

  // Constraint sets: bounded, origin inside (enforced at construction),
  // strictly positive reach in every sampled direction.
  bool reach_ok = true;
  std::string reach_detail;
  for (std::size_t i = 0; i < scenario.sets.size(); ++i) {
    try {
      report.rho.push_back(estimate_rho_bounds(scenario.sets[i], 360));
    } catch (const EmptyReach& e) {
      reach_ok = false;
      reach_detail = "agent " + std::to_string(i + 1) + ": " + e.what();
      report.rho.push_back(RhoBounds{0.0, 0.0});
    }
  }
  add("constraint_reach_positive", reach_ok, reach_ok ? "all sampled reaches > 0" : reach_detail);

  // Gain feasibility: p0*T in (0,1) held by construction in materialize();
  // report the margin to the cap.
  double min_margin = 1.0;
  for (int i = 0; i < scenario.cfg.n; ++i) {
    min_margin = std::min(min_margin, 1.0 - scenario.gains.p0[i] * scenario.cfg.T);
  }
  add("gain_design_feasible", min_margin > 0.0,
      "min 1 - p0*T margin = " + std::to_string(min_margin));

  // Weight normalization must be able to respect the floor on every
  // distinct snapshot of a periodic schedule (random schedules are built
  // above the floor by construction).
  bool floor_ok = true;
  std::string floor_detail = "normalization respects the weight floor";
  if (scenario.cfg.schedule.kind == ScheduleSpec::Kind::Periodic) {
    const int period = static_cast<int>(scenario.cfg.schedule.snapshots.size());
    for (int k = 0; k < period && floor_ok; ++k) {
      try {
        normalize_weights(scenario.schedule.at(k), scenario.gains.d,
                          scenario.schedule.weight_floor());
      } catch (const FloorConflict& e) {
        floor_ok = false;
        floor_detail = std::string("snapshot ") + std::to_string(k) + ": " + e.what();
      }
    }
  }
  add("weight_floor_compatible", floor_ok, floor_detail);

  // Joint connectivity over the horizon.
  bool connected = false;
  std::string conn_detail;
  try {
    connected = verify_joint_connectivity(
        scenario.schedule, std::max(scenario.cfg.horizon, scenario.schedule.window_length()));
    conn_detail = connected ? "every window union has a directed spanning tree"
                            : "some window union lacks a directed spanning tree";
  } catch (const Error& e) {
    conn_detail = e.what();
  }
  add("joint_connectivity", connected, conn_detail);

  return report;
}

void require_valid(const Scenario& scenario, const ValidationReport& report) {
  if (report.all_passed || scenario.cfg.allow_violations) return;
  for (const auto& check : report.checks) {
    if (!check.passed) {
      throw ValidationError("assumption check '" + check.name + "' failed: " + check.detail);
    }
  }
}

Trajectory run_scenario(const Scenario& scenario) {
  const ScenarioConfig& cfg = scenario.cfg;
  const int M = scenario.schedule.delay_bound();

  World world{scenario.x0,
              Eigen::MatrixXd::Zero(cfg.n, cfg.r),
              scenario.gains.p0,
              scenario.gains.d,
              DelayBuffer(scenario.x0, M + 1)};
  // Initial velocities are clamped into the sets before the first step.
  for (int i = 0; i < cfg.n; ++i) {
    world.v.row(i) =
        scale_into_set(scenario.sets[i], scenario.v0.row(i).transpose()).output.transpose();
  }

  Trajectory traj;
  traj.config_hash = scenario.hash;
  traj.horizon = cfg.horizon;
  traj.n = cfg.n;
  traj.r = cfg.r;
  traj.T = cfg.T;
  traj.d = scenario.gains.d;
  traj.steps.reserve(static_cast<std::size_t>(cfg.horizon) + 1);

  for (int k = 0; k <= cfg.horizon; ++k) {
    StepRecord record;
    record.k = k;
    record.x = world.x;
    record.v = world.v;
    record.p = world.p;
    record.diameter = position_diameter(world.x);

    const GraphSnapshot g = normalize_weights(scenario.schedule.at(k), scenario.gains.d,
                                              scenario.schedule.weight_floor());
    StepOutcome outcome;
    try {
      if (k < cfg.horizon) {
        outcome = step_world(world, g, scenario.sets, cfg.T, scenario.policy);
      } else {
        outcome = peek_controls(world, g, scenario.sets, cfg.T);
      }
    } catch (const Error& e) {
      throw Error("step " + std::to_string(k) + ": " + e.what());
    }
    record.e = outcome.e;
    record.b = outcome.b;
    traj.steps.push_back(std::move(record));
  }
  return traj;
}

ScenarioConfig make_cycle_example_config() {
  ScenarioConfig cfg;
  cfg.name = "four_agent_cycle";
  cfg.n = 4;
  cfg.r = 2;
  cfg.T = 0.2;
  cfg.horizon = 600;
  cfg.seed = 1;
  cfg.gain_policy = "b_prev";

  ShapeDesc set = ShapeDesc::join(
      {ShapeDesc::ball(1.0),
       ShapeDesc::box((Eigen::VectorXd(2) << -0.5, 0.0).finished(),
                      (Eigen::VectorXd(2) << 0.5, 1.5).finished())});
  for (int i = 0; i < 4; ++i) {
    AgentSpec a;
    a.p0 = 1.5;
    a.set = set;
    cfg.agents.push_back(a);
  }

  cfg.schedule.kind = ScheduleSpec::Kind::Periodic;
  cfg.schedule.eta = 4;
  cfg.schedule.window_length = 4;
  cfg.schedule.mu_c = 0.05;
  cfg.schedule.delay_bound = 3;
  const int delays[4] = {1, 2, 3, 3};
  for (int k = 0; k < 4; ++k) {
    SnapshotSpec snap;
    snap.edges.push_back(EdgeSpec{k, (k + 1) % 4, 0.5, delays[k]});
    cfg.schedule.snapshots.push_back(snap);
  }
  cfg.out_dir = "out/four_agent_cycle";
  return cfg;
}

ScenarioConfig make_random_scenario(std::uint64_t master_seed, int index) {
  Rng rng(Rng::derive(master_seed, 0x5ce7a910ULL + static_cast<std::uint64_t>(index)));
  ScenarioConfig cfg;
  cfg.name = "random_" + std::to_string(index);
  cfg.n = rng.uniform_int(3, 8);
  cfg.r = rng.uniform01() < 0.25 ? 2 : 1;
  const double T_choices[3] = {0.1, 0.2, 0.5};
  cfg.T = T_choices[rng.uniform_int(0, 2)];
  cfg.seed = Rng::derive(master_seed, 0xbeefULL + static_cast<std::uint64_t>(index));

  cfg.schedule.kind = ScheduleSpec::Kind::SeededRandom;
  cfg.schedule.delay_bound = rng.uniform_int(0, 5);
  cfg.schedule.eta = rng.uniform_int(1, 3);
  cfg.schedule.window_length = cfg.schedule.eta;
  // Weight draws leave room for row normalization above the floor: with
  // p0*T >= 0.5 the caps satisfy d_i >= 0.245, in-degree per snapshot is at
  // most 1 + extra_edges <= 4, so scaled weights stay above
  // 0.1 * 0.245 / 3.2 > mu_c.
  cfg.schedule.mu_c = 0.005;
  cfg.schedule.extra_edges = rng.uniform_int(0, 3);
  cfg.schedule.weight_min = 0.1;
  cfg.schedule.weight_max = 0.8;

  // Horizon: enough steps for two positive-column blocks of
  // n_hat = 4 n (M+1) windows, plus settling room for the rate fit.
  const int n_hat = 4 * cfg.n * (cfg.schedule.delay_bound + 1);
  const int block_steps = n_hat * cfg.schedule.window_length;
  cfg.horizon = std::max(2 * block_steps + 4 * cfg.schedule.window_length, 400);

  for (int i = 0; i < cfg.n; ++i) {
    AgentSpec a;
    a.p0 = rng.uniform(0.5, 0.9) / cfg.T;
    const double radius = rng.uniform(0.5, 2.0);
    if (rng.uniform01() < 0.5) {
      a.set = ShapeDesc::ball(radius);
    } else {
      // Origin-containing box lobe on top of the ball.
      Eigen::VectorXd lower(cfg.r), upper(cfg.r);
      for (int c = 0; c < cfg.r; ++c) {
        lower[c] = -rng.uniform(0.0, radius);
        upper[c] = rng.uniform(0.1, 2.5 * radius);
      }
      a.set = ShapeDesc::join({ShapeDesc::ball(radius), ShapeDesc::box(lower, upper)});
    }
    a.has_v0 = true;
    a.v0.resize(cfg.r);
    for (int c = 0; c < cfg.r; ++c) a.v0[c] = rng.uniform(-2.0, 2.0);
    cfg.agents.push_back(a);
  }
  cfg.out_dir = "out/" + cfg.name;
  return cfg;
}

ScenarioConfig make_disconnected_scenario() {
  ScenarioConfig cfg;
  cfg.name = "disconnected_control";
  cfg.n = 4;
  cfg.r = 1;
  cfg.T = 0.2;
  cfg.horizon = 200;
  cfg.seed = 7;
  cfg.allow_violations = true;

  for (int i = 0; i < 4; ++i) {
    AgentSpec a;
    a.p0 = 1.5;
    a.set = ShapeDesc::ball(1.0);
    cfg.agents.push_back(a);
  }
  // Agents 3 and 4 never exchange an edge with anyone.
  cfg.schedule.kind = ScheduleSpec::Kind::Periodic;
  cfg.schedule.eta = 2;
  cfg.schedule.window_length = 2;
  cfg.schedule.mu_c = 0.05;
  cfg.schedule.delay_bound = 1;
  SnapshotSpec s1, s2;
  s1.edges.push_back(EdgeSpec{0, 1, 0.5, 1});
  s2.edges.push_back(EdgeSpec{1, 0, 0.5, 0});
  cfg.schedule.snapshots = {s1, s2};
  cfg.out_dir = "out/disconnected_control";
  return cfg;
}

ScenarioConfig make_unconstrained_scenario(std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.name = "unconstrained";
  cfg.n = 4;
  cfg.r = 1;
  cfg.T = 0.2;
  cfg.horizon = 600;
  cfg.seed = seed;

  for (int i = 0; i < 4; ++i) {
    AgentSpec a;
    a.p0 = 1.5;
    a.set = ShapeDesc::ball(1e6);
    a.has_v0 = true;
    a.v0 = Eigen::VectorXd::Constant(1, 0.25 * (i - 1.5));
    cfg.agents.push_back(a);
  }
  cfg.schedule.kind = ScheduleSpec::Kind::Periodic;
  cfg.schedule.eta = 4;
  cfg.schedule.window_length = 4;
  cfg.schedule.mu_c = 0.05;
  cfg.schedule.delay_bound = 2;
  const int delays[4] = {1, 2, 0, 2};
  for (int k = 0; k < 4; ++k) {
    SnapshotSpec snap;
    snap.edges.push_back(EdgeSpec{k, (k + 1) % 4, 0.5, delays[k]});
    cfg.schedule.snapshots.push_back(snap);
  }
  cfg.out_dir = "out/unconstrained";
  return cfg;
}

}  // namespace vcc
