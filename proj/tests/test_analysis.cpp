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

#include <cmath>

#include "test_oracles.hpp"
#include "vcc/analysis.hpp"
#include "vcc/io.hpp"

using namespace vcc;

namespace {

// One step of the rotating-cycle scenario, with optional truncation state.
StepMatrices example_step(double e_value = 1.0) {
  GraphSnapshot g = GraphSnapshot::empty(4);
  g.add_edge(0, 1, 0.5, 1);
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(4, 1.5);
  const Eigen::VectorXd b_next = Eigen::VectorXd::Constant(4, 1.0 - e_value * 0.7) / 0.2;
  const Eigen::VectorXd e = Eigen::VectorXd::Constant(4, e_value);
  return build_step_matrices(g, b, b_next.cwiseMax(b), e, 0.2, 3, 0);
}

ScenarioConfig consensus_start_config() {
  ScenarioConfig cfg = make_unconstrained_scenario(1);
  for (auto& a : cfg.agents) {
    a.has_x0 = true;
    a.x0 = Eigen::VectorXd::Constant(1, 2.5);
    a.v0 = Eigen::VectorXd::Zero(1);
  }
  cfg.horizon = 100;
  return cfg;
}

}  // namespace

TEST_CASE("transformation matrices match their closed forms") {
  const StepMatrices sm = example_step();

  // Q(k+1) Q(k)^-1 = [[1, 0], [1 - b/b', b/b']] blockwise.
  const Eigen::MatrixXd qq = sm.Q_next * sm.Q.inverse();
  for (int i = 0; i < sm.n; ++i) {
    const double ratio = sm.b[i] / sm.b_next[i];
    CHECK(qq(2 * i, 2 * i) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(qq(2 * i, 2 * i + 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(qq(2 * i + 1, 2 * i) == doctest::Approx(1.0 - ratio).epsilon(1e-12));
    CHECK(qq(2 * i + 1, 2 * i + 1) == doctest::Approx(ratio).epsilon(1e-12));
  }

  // A = Q A_tilde Q^-1.
  CHECK((sm.A - sm.Q * sm.A_tilde * sm.Q.inverse()).cwiseAbs().maxCoeff() <= 1e-12);

  // Delay buckets partition the weighted adjacency: each edge lands in
  // exactly one Phi_m.
  Eigen::MatrixXd bucket_sum = Eigen::MatrixXd::Zero(sm.n, sm.n);
  for (const auto& phi : sm.Phi) bucket_sum += phi;
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected(1, 0) = 0.5;
  CHECK(bucket_sum == expected);
  CHECK(sm.Phi[1](1, 0) == 0.5);  // the edge sits in its delay bucket

  // Coupling blocks only read x entries: the v-columns of every delayed
  // block are zero.
  for (int m = 1; m <= sm.M; ++m) {
    const Eigen::MatrixXd block = sm.Psi.block(0, 2 * sm.n * m, 2 * sm.n, 2 * sm.n);
    for (int j = 0; j < sm.n; ++j) {
      CHECK(block.col(2 * j + 1).isZero(0.0));
    }
  }

  // Stochasticity of the step factor.
  CHECK((sm.step_factor.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
  CHECK(sm.step_factor.minCoeff() >= 0.0);
}

TEST_CASE("edge-free steps reduce to the symmetric block") {
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(2, 2.0);
  const Eigen::VectorXd e = Eigen::VectorXd::Ones(2);
  const GraphSnapshot none = GraphSnapshot::empty(2);
  const StepMatrices sm = build_step_matrices(none, b, b, e, 0.2, 1, 0);

  CHECK(sm.Psi.topLeftCorner(4, 4) == sm.A);
  CHECK(sm.Psi.block(0, 4, 4, 4).isZero(0.0));
  // Constant gains make the left transformation the identity.
  CHECK(sm.step_factor == sm.Psi);

  // Two such steps: the product's leading block is A squared.
  TransitionProduct tp = TransitionProduct::identity(0, sm.dim());
  tp = advance_transition(tp, sm);
  StepMatrices sm1 = build_step_matrices(none, b, b, e, 0.2, 1, 1);
  tp = advance_transition(tp, sm1);
  CHECK((tp.Gamma.topLeftCorner(4, 4) - sm.A * sm.A).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(tp.to_step == 1);
}

TEST_CASE("transition product guards") {
  const StepMatrices sm = example_step();
  TransitionProduct tp = TransitionProduct::identity(0, sm.dim());

  // Identity base: one advance equals the factor itself.
  const TransitionProduct once = advance_transition(tp, sm);
  CHECK(once.Gamma == sm.step_factor);

  // Step mismatch is rejected.
  StepMatrices wrong = example_step();
  wrong.step = 5;
  CHECK_THROWS_AS(advance_transition(once, wrong), ValidationError);

  // Row-sum drift beyond 1e-7 is refused rather than renormalized.
  StepMatrices corrupt = example_step();
  corrupt.step = 1;
  corrupt.step_factor(0, 0) += 1e-5;
  CHECK_THROWS_AS(advance_transition(once, corrupt), StochasticityViolation);
}

TEST_CASE("auxiliary matrix bounds the step factor from below") {
  for (double e_value : {1.0, 0.6}) {
    const StepMatrices sm = example_step(e_value);
    const ThetaResult theta = auxiliary_theta(sm);

    CHECK((sm.step_factor - theta.theta).minCoeff() >= 0.0);
    CHECK(theta.min_nonzero > 0.0);

    // Structural edges of the auxiliary graph (0-based indices).
    for (int j = 0; j < sm.n; ++j) {
      CHECK(theta.theta(2 * j, 2 * j + 1) > 0.0);      // x-row reads v
      CHECK(theta.theta(2 * j + 1, 2 * j) > 0.0);      // v-row reads x
      CHECK(theta.theta(2 * j, 2 * j) > 0.0);          // leading diagonal
      CHECK(theta.theta(2 * j + 1, 2 * j + 1) > 0.0);
    }
    for (int m = 1; m <= sm.M; ++m) {
      for (int l = 0; l < 2 * sm.n; ++l) {
        CHECK(theta.theta(2 * sm.n * m + l, 2 * sm.n * (m - 1) + l) == 1.0);
      }
    }

    // Uniform lower bound built from p(0) T, the cap d, and the floor:
    // ratio >= p0 T, diagonal coupling >= p0T/2 - 2 T d / p0, neighbor
    // entries >= e mu_c 2T^2, leading diagonals >= 1 - bT/2 > 1/2.
    const double p0 = 1.5, T = 0.2, d_cap = 0.55125, mu_c = 0.05;
    const double ratio_floor = p0 * T;
    const double diag_coupling = p0 * T / 2.0 - 2.0 * T * d_cap / p0;
    const double neighbor = e_value * mu_c * 2.0 * T * T;
    const double bound =
        ratio_floor * std::min({diag_coupling, neighbor, 0.5});
    CHECK(diag_coupling > 0.0);
    CHECK(theta.min_nonzero >= bound);
  }
}

TEST_CASE("positive columns over window blocks") {
  // Static complete triangle: positivity appears already at 2 windows,
  // far earlier than the worst-case bound 4 n (M+1) = 12.
  ScenarioConfig cfg;
  cfg.name = "complete3";
  cfg.n = 3;
  cfg.r = 1;
  cfg.T = 0.2;
  cfg.horizon = 40;
  cfg.seed = 3;
  for (int i = 0; i < 3; ++i) {
    AgentSpec a;
    a.p0 = 1.5;
    a.set = ShapeDesc::ball(1e6);
    a.has_x0 = true;
    a.x0 = Eigen::VectorXd::Constant(1, i - 1.0);
    cfg.agents.push_back(a);
  }
  cfg.schedule.kind = ScheduleSpec::Kind::Periodic;
  cfg.schedule.eta = 1;
  cfg.schedule.window_length = 1;
  cfg.schedule.mu_c = 0.05;
  cfg.schedule.delay_bound = 0;
  SnapshotSpec s;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) s.edges.push_back(EdgeSpec{j, i, 0.25, 0});
    }
  }
  cfg.schedule.snapshots = {s};

  const Scenario scenario = materialize(cfg);
  const Trajectory traj = run_scenario(scenario);
  const auto factor_at = [&](int k) {
    return build_step_matrices(
        normalize_weights(scenario.schedule.at(k), scenario.gains.d, 0.05),
        traj.steps[static_cast<std::size_t>(k)].b, traj.steps[static_cast<std::size_t>(k) + 1].b,
        traj.steps[static_cast<std::size_t>(k)].e, cfg.T, 0, k);
  };

  const PositiveColumnResult early = positive_column_window(factor_at, cfg.horizon, 1, 2, 3, 0);
  CHECK(early.found);
  CHECK(early.mu_hat > 0.0);
  CHECK(early.column < 2 * 3);

  const PositiveColumnResult worst = positive_column_window(factor_at, cfg.horizon, 1, 12, 3, 0);
  CHECK(worst.found);
  CHECK(worst.mu_hat > early.mu_hat);  // longer products mix further

  CHECK_THROWS_AS(positive_column_window(factor_at, 10, 1, 12, 3, 0), InsufficientHorizon);

  // Fully disconnected control: no positive column can appear.
  const Scenario dead = materialize(make_disconnected_scenario());
  const Trajectory dead_traj = run_scenario(dead);
  const AnalysisResult dead_result = analyze_scenario(dead, dead_traj);
  CHECK_FALSE(dead_result.positive_column.found);
  CHECK(dead_result.positive_column.best_min_entry == 0.0);
}

TEST_CASE("row range report") {
  std::vector<TransitionProduct> checkpoints;
  checkpoints.push_back(TransitionProduct::identity(0, 6));
  for (int j = 0; j < 6; ++j) {
    CHECK(row_range_report(checkpoints, j) == std::vector<double>{1.0});
  }

  // A later checkpoint whose column max grew is flagged.
  TransitionProduct bad = TransitionProduct::identity(0, 6);
  bad.Gamma(0, 0) = 1.5;
  checkpoints.push_back(bad);
  CHECK_THROWS_AS(row_range_report(checkpoints, 0), StochasticityViolation);
}

TEST_CASE("exponential rate fit") {
  SUBCASE("already consensed trajectory degenerates cleanly") {
    const ScenarioConfig cfg = consensus_start_config();
    const Trajectory traj = run_scenario(materialize(cfg));
    const RateFit fit = fit_exponential_rate(traj);
    CHECK(fit.degenerate);
    CHECK(fit.C == 0.0);
    CHECK(fit.mu == 1.0);
  }

  SUBCASE("two-agent symmetric case matches the closed-form contraction") {
    // p = 1.5, a = 0.25, T = 0.2: real eigenvalues 0.9 and 0.8.
    ScenarioConfig cfg;
    cfg.name = "pair";
    cfg.n = 2;
    cfg.r = 1;
    cfg.T = 0.2;
    cfg.horizon = 400;
    cfg.seed = 1;
    for (int i = 0; i < 2; ++i) {
      AgentSpec a;
      a.p0 = 1.5;
      a.set = ShapeDesc::ball(1e6);
      a.has_x0 = true;
      a.x0 = Eigen::VectorXd::Constant(1, i == 0 ? 1.0 : -1.0);
      cfg.agents.push_back(a);
    }
    cfg.schedule.kind = ScheduleSpec::Kind::Periodic;
    cfg.schedule.eta = 1;
    cfg.schedule.window_length = 1;
    cfg.schedule.mu_c = 0.05;
    cfg.schedule.delay_bound = 0;
    SnapshotSpec s;
    s.edges.push_back(EdgeSpec{0, 1, 0.25, 0});
    s.edges.push_back(EdgeSpec{1, 0, 0.25, 0});
    cfg.schedule.snapshots = {s};

    const double analytic = testing::two_agent_contraction(1.5, 0.25, 0.2);
    CHECK(analytic == doctest::Approx(0.9).epsilon(1e-12));

    const Trajectory traj = run_scenario(materialize(cfg));
    const RateFit fit = fit_exponential_rate(traj);
    CHECK(fit.mu_valid);
    CHECK(std::abs((1.0 - fit.mu) - analytic) <= 0.1 * analytic);
    CHECK(fit.r2 >= 0.99);
  }
}

TEST_CASE("dual simulation equivalence") {
  SUBCASE("consensus initial state stays fixed on both paths") {
    const Scenario scenario = materialize(consensus_start_config());
    const Trajectory traj = run_scenario(scenario);
    CHECK(dual_simulate(scenario, traj) <= 1e-12);
  }

  SUBCASE("unconstrained scenario") {
    const Scenario scenario = materialize(make_unconstrained_scenario(4));
    const Trajectory traj = run_scenario(scenario);
    for (const auto& rec : traj.steps) {
      CHECK(rec.e == Eigen::VectorXd::Ones(4));  // e is identically one
    }
    CHECK(dual_simulate(scenario, traj) <= 1e-9);
  }

  SUBCASE("rotating-cycle scenario with truncation active") {
    ScenarioConfig cfg = make_cycle_example_config();
    cfg.seed = 2;  // this draw truncates several times
    const Scenario scenario = materialize(cfg);
    const Trajectory traj = run_scenario(scenario);
    int truncations = 0;
    for (const auto& rec : traj.steps) truncations += (rec.e.array() < 1.0).count();
    CHECK(truncations > 0);
    CHECK(dual_simulate(scenario, traj) <= 1e-7);
  }
}

TEST_CASE("long products of the rotating-cycle factors reach a common row") {
  ScenarioConfig cfg = make_cycle_example_config();
  const Scenario scenario = materialize(cfg);
  const Trajectory traj = run_scenario(scenario);

  TransitionProduct tp = TransitionProduct::identity(0, 2 * 4 * (3 + 1));
  const auto factor_at = [&](int k) {
    return build_step_matrices(
        normalize_weights(scenario.schedule.at(k), scenario.gains.d, 0.05),
        traj.steps[static_cast<std::size_t>(k)].b, traj.steps[static_cast<std::size_t>(k) + 1].b,
        traj.steps[static_cast<std::size_t>(k)].e, cfg.T, 3, k);
  };
  for (int k = 0; k < 600; ++k) tp = advance_transition(tp, factor_at(k));

  // Rows converge toward a common limit vector at the closed-loop rate;
  // after 600 steps they agree to about 5e-5.
  const Eigen::VectorXd col_range =
      tp.Gamma.colwise().maxCoeff() - tp.Gamma.colwise().minCoeff();
  CHECK(col_range.maxCoeff() <= 1e-4);
  CHECK(col_range.maxCoeff() > 0.0);
  // The limit row is a probability vector.
  CHECK(tp.Gamma.row(0).sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(tp.Gamma.row(0).minCoeff() >= 0.0);

  // Positivity shows up far before the worst-case window count 4n(M+1) = 64.
  const int first = first_positive_block_windows(factor_at, 600, 4, 4, 3);
  CHECK(first > 0);
  CHECK(first <= 64);
}

TEST_CASE("streaming analysis matches the standalone operations") {
  ScenarioConfig cfg = make_random_scenario(555, 1);
  cfg.horizon = std::min(cfg.horizon, 600);
  const Scenario scenario = materialize(cfg);
  const Trajectory traj = run_scenario(scenario);
  const AnalysisResult result = analyze_scenario(scenario, traj);

  CHECK(result.max_factor_row_sum_err <= 1e-12);
  CHECK(result.max_gamma_row_sum_err <= 1e-9);
  CHECK(result.min_factor_entry >= 0.0);
  CHECK(result.min_gamma_entry >= 0.0);
  CHECK(result.minmax_monotone_ok);
  CHECK(result.dual_ran);
  CHECK(result.dual_max_deviation == dual_simulate(scenario, traj));
  CHECK(result.theta_domination_gap >= 0.0);
  CHECK(result.e_bound_violations == 0);
}
