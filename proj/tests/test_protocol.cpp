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

#include "vcc/protocol.hpp"
#include "vcc/scenario.hpp"

using namespace vcc;

namespace {

Eigen::VectorXd vec2(double x, double y) { return (Eigen::VectorXd(2) << x, y).finished(); }

ConstraintSet example_union_set() {
  return ConstraintSet::set_union(
      {ConstraintSet::ball(1.0, 2), ConstraintSet::axis_box(vec2(-0.5, 0.0), vec2(0.5, 1.5))});
}

}  // namespace

TEST_CASE("initial gain design") {
  const GainDesign d1 = design_initial_gains(0.2, Eigen::VectorXd::Constant(4, 1.5));
  CHECK(d1.d[0] == doctest::Approx(0.55125).epsilon(1e-12));
  for (int i = 0; i < 4; ++i) CHECK(d1.d[i] < 1.5 * 1.5 / 4.0);

  CHECK_THROWS_AS(design_initial_gains(0.2, Eigen::VectorXd::Constant(1, 5.1)), GainOutOfRange);
  CHECK_THROWS_AS(design_initial_gains(0.2, Eigen::VectorXd::Constant(1, -0.1)), GainOutOfRange);

  const GainDesign d2 = design_initial_gains(1.0, Eigen::VectorXd::Constant(1, 0.5));
  CHECK(d2.d[0] == doctest::Approx(0.06125).epsilon(1e-12));
}

TEST_CASE("weight normalization against the diagonal cap") {
  const Eigen::VectorXd d = Eigen::VectorXd::Constant(3, 0.55);

  GraphSnapshot light = GraphSnapshot::empty(3);
  light.add_edge(1, 0, 0.5, 0);
  CHECK(normalize_weights(light, d, 0.05).weights == light.weights);

  GraphSnapshot heavy = GraphSnapshot::empty(3);
  heavy.add_edge(1, 0, 0.5, 0);
  heavy.add_edge(2, 0, 0.5, 0);
  const GraphSnapshot scaled = normalize_weights(heavy, d, 0.05);
  CHECK(scaled.weights(0, 1) == doctest::Approx(0.275).epsilon(1e-12));
  CHECK(scaled.weights(0, 2) == doctest::Approx(0.275).epsilon(1e-12));
  CHECK(laplacian(scaled)(0, 0) <= 0.55 + 1e-12);

  CHECK(normalize_weights(GraphSnapshot::empty(3), d, 0.05).weights.isZero(0.0));

  CHECK_THROWS_AS(normalize_weights(heavy, d, 0.3), FloorConflict);
}

TEST_CASE("delay buffer ring") {
  const Eigen::MatrixXd x0 = Eigen::MatrixXd::Constant(2, 1, 3.0);
  DelayBuffer buf(x0, 4);
  CHECK(buf.at_age(0) == x0);
  CHECK(buf.at_age(3) == x0);
  CHECK_THROWS_AS(buf.at_age(4), BufferUnderflow);

  const Eigen::MatrixXd x1 = Eigen::MatrixXd::Constant(2, 1, 5.0);
  buf.push(x1);
  CHECK(buf.at_age(0) == x1);
  CHECK(buf.at_age(1) == x0);
  CHECK(buf.at_age(3) == x0);
}

TEST_CASE("consensus term") {
  const double T = 0.2;
  Eigen::MatrixXd x(2, 2);
  x << 0.0, 0.0, 2.0, 0.0;  // agent 2 sits at (2, 0)
  DelayBuffer buf(x, 4);

  GraphSnapshot none = GraphSnapshot::empty(2);
  CHECK(consensus_term(0, none, buf, T).isZero(0.0));

  GraphSnapshot one = GraphSnapshot::empty(2);
  one.add_edge(1, 0, 0.5, 0);
  const Eigen::VectorXd pi = consensus_term(0, one, buf, T);
  CHECK(pi[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(pi[1] == 0.0);

  // Constant history: a delay of 3 reads the same positions.
  GraphSnapshot delayed = GraphSnapshot::empty(2);
  delayed.add_edge(1, 0, 0.5, 3);
  CHECK(consensus_term(0, delayed, buf, T) == pi);

  GraphSnapshot too_delayed = GraphSnapshot::empty(2);
  too_delayed.add_edge(1, 0, 0.5, 4);
  CHECK_THROWS_AS(consensus_term(0, too_delayed, buf, T), BufferUnderflow);
}

TEST_CASE("constrained control input") {
  const double T = 0.2;
  const ConstraintSet sv = example_union_set();

  // Zero raw vector: the e = 1 convention makes b equal p.
  const ControlResult czero = control_input(Eigen::VectorXd::Zero(2), 1.5,
                                            Eigen::VectorXd::Zero(2), sv, T);
  CHECK(czero.e == 1.0);
  CHECK(czero.u.isZero(0.0));
  CHECK(czero.b == doctest::Approx(1.5).epsilon(1e-12));

  // Feasible raw vector passes through untouched.
  const ControlResult cid = control_input(vec2(0.0, 0.5), 1.5, vec2(0.0, 0.2), sv, T);
  CHECK(cid.e == 1.0);
  CHECK(cid.u == (vec2(0.0, 0.5) - 1.5 * T * vec2(0.0, 0.5) + vec2(0.0, 0.2)));
  CHECK(cid.b == doctest::Approx(1.5).epsilon(1e-12));

  // Truncated: w = (0, 3), reach 1.5 along +y, so e = 0.5 and
  // b = (1 - 0.5 (1 - 0.3)) / 0.2 = 3.25.
  const ControlResult cut = control_input(Eigen::VectorXd::Zero(2), 1.5, vec2(0.0, 3.0), sv, T);
  CHECK(cut.e == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(cut.u[1] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(cut.b == doctest::Approx(3.25).epsilon(1e-9));
}

TEST_CASE("gain update policies") {
  const GainPolicy b_prev = GainPolicy::b_prev();
  CHECK(update_gain(1.5, 3.25, 0.2, b_prev) == 3.25);
  CHECK(update_gain(1.5, 1.5, 0.2, b_prev) == 1.5);  // fixed point when never truncated

  const GainPolicy bad = GainPolicy::custom("too_small", [](double, double b, double) {
    return b - 0.1;
  });
  CHECK_THROWS_AS(update_gain(1.5, 3.25, 0.2, bad), PolicyViolation);

  const GainPolicy too_big = GainPolicy::custom("too_big", [](double, double, double T) {
    return 1.0 / T;
  });
  CHECK_THROWS_AS(update_gain(1.5, 3.25, 0.2, too_big), PolicyViolation);

  CHECK_THROWS_AS(update_gain(1.5, 5.5, 0.2, b_prev), GainOutOfRange);  // b T >= 1

  const GainPolicy mid = GainPolicy::midpoint();
  const double next = update_gain(1.5, 3.25, 0.2, mid);
  CHECK(next >= 3.25);
  CHECK(next * 0.2 < 1.0);

  CHECK_THROWS_AS(GainPolicy::by_name("unknown"), ValidationError);
}

TEST_CASE("synchronous step") {
  const double T = 0.2;
  const GainPolicy policy = GainPolicy::b_prev();

  SUBCASE("consensus is a fixed point") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Constant(3, 2, 1.25);
    World world{x, Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXd::Constant(3, 1.5),
                Eigen::VectorXd::Constant(3, 0.55125), DelayBuffer(x, 1)};
    std::vector<ConstraintSet> sets(3, example_union_set());
    GraphSnapshot g = GraphSnapshot::empty(3);
    g.add_edge(0, 1, 0.5, 0);
    const StepOutcome out = step_world(world, g, sets, T, policy);
    CHECK(world.x == x);
    CHECK(world.v.isZero(0.0));
    CHECK(out.e == Eigen::VectorXd::Ones(3));
  }

  SUBCASE("single unconstrained agent") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(1, 2);
    Eigen::MatrixXd v(1, 2);
    v << 1.0, 0.0;
    World world{x, v, Eigen::VectorXd::Constant(1, 1.5),
                Eigen::VectorXd::Constant(1, 0.55125), DelayBuffer(x, 1)};
    std::vector<ConstraintSet> sets(1, ConstraintSet::ball(1.0, 2));
    step_world(world, GraphSnapshot::empty(1), sets, T, policy);
    CHECK(world.x(0, 0) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(world.v(0, 0) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(world.v(0, 1) == 0.0);
  }
}

TEST_CASE("mirror-symmetric pair stays mirror-symmetric bit for bit") {
  ScenarioConfig cfg;
  cfg.name = "mirror";
  cfg.n = 2;
  cfg.r = 2;
  cfg.T = 0.2;
  cfg.horizon = 80;
  cfg.seed = 1;
  for (int i = 0; i < 2; ++i) {
    AgentSpec a;
    a.p0 = 1.5;
    a.set = ShapeDesc::ball(1.0);
    a.has_x0 = a.has_v0 = true;
    const double sign = i == 0 ? 1.0 : -1.0;
    a.x0 = sign * vec2(3.0, -2.0);
    a.v0 = sign * vec2(-0.4, 0.9);
    cfg.agents.push_back(a);
  }
  cfg.schedule.kind = ScheduleSpec::Kind::Periodic;
  cfg.schedule.eta = 1;
  cfg.schedule.window_length = 1;
  cfg.schedule.mu_c = 0.05;
  cfg.schedule.delay_bound = 1;
  SnapshotSpec s;
  s.edges.push_back(EdgeSpec{0, 1, 0.25, 1});
  s.edges.push_back(EdgeSpec{1, 0, 0.25, 1});
  cfg.schedule.snapshots = {s};

  const Trajectory traj = run_scenario(materialize(cfg));
  for (const auto& rec : traj.steps) {
    CHECK(rec.x.row(0) == (-rec.x.row(1)).eval());
    CHECK(rec.v.row(0) == (-rec.v.row(1)).eval());
    CHECK(rec.e[0] == rec.e[1]);
    CHECK(rec.b[0] == rec.b[1]);
  }
}

TEST_CASE("run over a horizon") {
  ScenarioConfig cfg = make_cycle_example_config();
  cfg.horizon = 0;
  const Trajectory empty = run_scenario(materialize(cfg));
  CHECK(empty.steps.size() == 1);
  CHECK(empty.steps[0].k == 0);
  CHECK(empty.steps[0].e.size() == 4);  // lookahead controls still recorded

  cfg.horizon = 50;
  const Scenario scenario = materialize(cfg);
  const Trajectory t1 = run_scenario(scenario);
  const Trajectory t2 = run_scenario(scenario);
  REQUIRE(t1.steps.size() == t2.steps.size());
  for (std::size_t k = 0; k < t1.steps.size(); ++k) {
    CHECK(t1.steps[k].x == t2.steps[k].x);
    CHECK(t1.steps[k].v == t2.steps[k].v);
    CHECK(t1.steps[k].e == t2.steps[k].e);
    CHECK(t1.steps[k].p == t2.steps[k].p);
    CHECK(t1.steps[k].b == t2.steps[k].b);
  }
}

TEST_CASE("velocity feasibility and the gain chain along a run") {
  ScenarioConfig cfg = make_random_scenario(777, 3);
  cfg.horizon = 300;
  const Scenario scenario = materialize(cfg);
  const Trajectory traj = run_scenario(scenario);

  // The per-agent view agrees with the raw record columns.
  const AgentState probe = traj.agent_state(5, traj.n - 1);
  CHECK(probe.x == traj.steps[5].x.row(traj.n - 1).transpose());
  CHECK(probe.p == traj.steps[5].p[traj.n - 1]);
  CHECK(probe.d == scenario.gains.d[traj.n - 1]);
  CHECK(probe.set_id == traj.n - 1);

  int truncations = 0;
  for (std::size_t k = 0; k < traj.steps.size(); ++k) {
    const StepRecord& rec = traj.steps[k];
    for (int i = 0; i < traj.n; ++i) {
      CHECK(scenario.sets[i].contains(rec.v.row(i).transpose()));
      CHECK(rec.p[i] * traj.T > 0.0);
      CHECK(rec.p[i] * traj.T <= rec.b[i] * traj.T);
      CHECK(rec.b[i] * traj.T < 1.0);
      CHECK(rec.p[i] * rec.p[i] > 4.0 * scenario.gains.d[i]);
      CHECK(rec.e[i] > 0.0);
      CHECK(rec.e[i] <= 1.0);
      if (rec.e[i] < 1.0) ++truncations;
      if (k + 1 < traj.steps.size()) {
        CHECK(rec.b[i] <= traj.steps[k + 1].p[i]);
      }
    }
  }
  INFO("truncation events: ", truncations);
}
