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

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "vcc/scenario.hpp"

namespace vcc {

/// All matrices of the per-step model transformation for a scalar state
/// axis. The same matrices serve every axis of an r > 1 scenario because
/// the scaling factor e_i(k) multiplies the whole control vector.
///
/// Block layout: the stacked state interleaves (x_i, v_i) pairs, so agent i
/// occupies rows 2i and 2i+1 (0-based); delayed copies follow in blocks of
/// 2n, oldest last.
struct StepMatrices {
  int step = -1;  // time index k, -1 when detached
  int n = 0;
  int M = 0;
  double T = 0.0;
  Eigen::VectorXd b;       // b_i(k)
  Eigen::VectorXd b_next;  // b_i(k+1)
  Eigen::VectorXd e;       // e_i(k)
  Eigen::VectorXd L0;      // Laplacian diagonal at k
  Eigen::MatrixXd A_tilde;              // 2n x 2n, per-agent [[1,T],[0,1-bT]]
  Eigen::MatrixXd B_tilde;              // 2n x 2n, I_n (x) F
  Eigen::MatrixXd Q, Q_next;            // 2n x 2n, per-agent [[1,0],[1,2/b]]
  std::vector<Eigen::MatrixXd> Phi;     // M+1 delay buckets of the adjacency
  Eigen::MatrixXd A;                    // 2n x 2n, per-agent symmetric stochastic block
  Eigen::MatrixXd B;                    // 2n x 2n, per-agent [[0,0],[0,2/b]]
  Eigen::Matrix2d F;                    // [[0,0],[T,0]]
  Eigen::MatrixXd Psi;                  // 2n(M+1) square
  Eigen::MatrixXd step_factor;          // diag{Q(k+1)Q(k)^-1, I} Psi

  int dim() const { return 2 * n * (M + 1); }
};

/// Builds every transformation matrix for one step from the normalized
/// graph, the recorded gains b(k), b(k+1) and scaling factors e(k).
StepMatrices build_step_matrices(const GraphSnapshot& g_normalized, const Eigen::VectorXd& b,
                                 const Eigen::VectorXd& b_next, const Eigen::VectorXd& e,
                                 double T, int M, int step = -1);

/// Running product Gamma(to_step, from_step) of per-step factors; maps the
/// stacked state Z(from_step) to Z(to_step + 1). to_step == from_step - 1
/// denotes the identity.
struct TransitionProduct {
  Eigen::MatrixXd Gamma;
  int from_step = 0;
  int to_step = -1;

  static TransitionProduct identity(int from_step, int dim);
};

/// Left-multiplies the next step factor onto the product and re-verifies
/// stochasticity; throws StochasticityViolation past 1e-7 row-sum drift
/// (renormalization is refused so construction bugs stay visible).
TransitionProduct advance_transition(const TransitionProduct& tp, const StepMatrices& sm);

struct ThetaResult {
  Eigen::MatrixXd theta;
  double min_nonzero;
};

/// Auxiliary elementwise lower bound of the step factor: the off-diagonal
/// mixing of Q(k+1)Q(k)^-1 is dropped, so every nonzero entry stays
/// uniformly bounded away from zero.
ThetaResult auxiliary_theta(const StepMatrices& sm);

struct BlockCertificate {
  int block = 0;        // index of the n_hat-window block
  int column = -1;      // 0-based positive column, -1 when none
  double min_entry = 0; // min entry of that column (the block's mu-hat)
};

struct PositiveColumnResult {
  bool found = false;   // every scanned block had a strictly positive column
  int column = -1;      // 0-based column of the best block
  double mu_hat = 0.0;  // largest per-block certificate
  double best_min_entry = 0.0;  // best column minimum seen (reported on NotFound)
  std::vector<BlockCertificate> blocks;
};

/// Scans products over consecutive blocks of n_hat windows for a column
/// among the first 2n whose entries are all strictly positive.
/// Throws InsufficientHorizon when not even one block fits.
PositiveColumnResult positive_column_window(const std::function<StepMatrices(int)>& factor_at,
                                            int num_steps, int window_length, int n_hat, int n,
                                            int M);

/// Smallest window count n_hat whose leading block already has a strictly
/// positive column, or -1 if none appears within the horizon. The worst-case
/// guarantee is 4 n (M+1) windows; actual mixing is usually much faster.
int first_positive_block_windows(const std::function<StepMatrices(int)>& factor_at, int num_steps,
                                 int window_length, int n, int M);

/// Row range (max over rows minus min over rows) of one column across a
/// checkpoint sequence; verifies the max is non-increasing and the min
/// non-decreasing along the sequence.
std::vector<double> row_range_report(const std::vector<TransitionProduct>& checkpoints,
                                     int column);

struct RateFit {
  double C = 0.0;
  double mu = 1.0;
  double r2 = 1.0;
  bool degenerate = true;  // too few usable points (already consensed)
  bool mu_valid = false;   // fitted mu in (0, 1]
  // Smallest factor on C that makes the envelope dominate every diameter
  // above the 1e-12 floor; dominates = multiplier <= 1.05.
  double envelope_multiplier = 1.0;
  bool envelope_dominates = false;
  int points = 0;
};

/// Least-squares fit of log diameter against k over the post-transient
/// segment (last `tail_fraction` of steps with diameter > 1e-12).
/// Throws DegenerateFit when fewer than 10 usable points exist unless the
/// trajectory is already at consensus, which returns the degenerate record.
RateFit fit_exponential_rate(const Trajectory& traj, double tail_fraction = 0.8);

/// Replays the closed loop through the transformed stacked recursion with
/// the recorded scaling factors and returns the maximum absolute deviation
/// from the recorded trajectory over all steps, agents, axes and both state
/// kinds.
double dual_simulate(const Scenario& scenario, const Trajectory& traj);

struct AnalysisResult {
  // Stochasticity of factors and transition checkpoints.
  double max_factor_row_sum_err = 0.0;
  double max_gamma_row_sum_err = 0.0;
  double min_factor_entry = 0.0;  // most negative factor entry observed
  double min_gamma_entry = 0.0;

  // Auxiliary matrix.
  double theta_min_nonzero = 0.0;
  double theta_domination_gap = 0.0;  // min over entries of step_factor - theta

  // Positive-column certificates and row ranges.
  PositiveColumnResult positive_column;
  int n_hat = 0;
  std::vector<double> window_ranges;          // max column range at each block checkpoint
  std::vector<Eigen::VectorXd> column_ranges; // per-checkpoint per-column ranges
  bool range_contraction_ok = true;
  double range_contraction_slack = 0.0;       // worst (range_next - (1-mu) range) observed
  bool minmax_monotone_ok = true;
  double max_monotonicity_violation = 0.0;

  // Scaling-factor lower bound.
  double max_z0_norm = 0.0;
  Eigen::VectorXd e_lower_bound;  // per agent
  int e_bound_violations = 0;
  double min_truncated_e = 1.0;
  int truncation_events = 0;

  // Dual-path equivalence.
  double dual_max_deviation = 0.0;
  bool dual_ran = false;

  // Exponential rate.
  RateFit fit;
  bool fit_ran = false;

  // Per-step logs (index k).
  std::vector<double> factor_row_sum_err_log;
  std::vector<double> gamma_row_sum_err_log;
  std::vector<double> dual_deviation_log;
};

/// One streaming pass over the recorded run: builds every step factor,
/// maintains the transition product and block certificates, and executes the
/// checks enabled in the scenario's analysis options.
AnalysisResult analyze_scenario(const Scenario& scenario, const Trajectory& traj);

}  // namespace vcc
