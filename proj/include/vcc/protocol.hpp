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
#include <string>
#include <vector>

#include "vcc/constraint_set.hpp"
#include "vcc/graph.hpp"

namespace vcc {

/// Per-agent initial damping gain and Laplacian-diagonal cap.
struct GainDesign {
  Eigen::VectorXd p0;
  Eigen::VectorXd d;
};

/// First two steps of the distributed gain design: accept p_i(0) with
/// 0 < p_i(0) T < 1 and derive the cap d_i = (1 - safety_margin) p_i(0)^2 / 4,
/// keeping d_i strictly below p_i(0)^2 / 4.
GainDesign design_initial_gains(double T, const Eigen::VectorXd& requested_p0,
                                double safety_margin = 0.02);

/// Scales each row whose weight sum exceeds d_i so the Laplacian diagonal
/// stays at or below the cap. Throws FloorConflict if scaling would push a
/// nonzero weight below the floor.
GraphSnapshot normalize_weights(const GraphSnapshot& g, const Eigen::VectorXd& d,
                                double weight_floor);

/// Rule for choosing p(k+1) within the bracket [b(k), 1/T).
class GainPolicy {
 public:
  using Fn = std::function<double(double p, double b, double T)>;

  /// p(k+1) = b(k): the tightest admissible choice.
  static GainPolicy b_prev();
  /// p(k+1) halfway between b(k) and 1/T.
  static GainPolicy midpoint();
  static GainPolicy custom(std::string name, Fn fn);
  static GainPolicy by_name(const std::string& name);

  double operator()(double p, double b, double T) const { return fn_(p, b, T); }
  const std::string& name() const { return name_; }

 private:
  GainPolicy(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  std::string name_;
  Fn fn_;
};

/// Applies the policy and enforces b_current <= p_next < 1/T.
/// Throws PolicyViolation when the policy steps outside the bracket.
double update_gain(double p_current, double b_current, double T, const GainPolicy& policy);

/// Ring of the last depth = M+1 world position matrices, indexed by age.
/// Age 0 is the current position; ages beyond the initial time return the
/// declared constant pre-history.
class DelayBuffer {
 public:
  DelayBuffer(Eigen::MatrixXd x0, int depth);

  int depth() const { return static_cast<int>(ring_.size()); }
  const Eigen::MatrixXd& at_age(int age) const;
  void push(const Eigen::MatrixXd& x_new);

 private:
  std::vector<Eigen::MatrixXd> ring_;
  int head_ = 0;
};

/// Delayed neighbor coupling
///   pi_i(k) = sum_j a_ij (x_j(k - tau_ij) - x_i(k)) T
/// evaluated from the position ring (age 0 holds x(k)).
Eigen::VectorXd consensus_term(int i, const GraphSnapshot& g, const DelayBuffer& buffers,
                               double T);

struct ControlResult {
  Eigen::VectorXd u;  // constrained control, the next velocity
  double e;           // scaling factor |u| / |w|, 1 when no truncation
  double b;           // (1 - e (1 - p T)) / T
};

/// Constrained control: w = v - p v T + pi, u = S_V(w).
ControlResult control_input(const Eigen::VectorXd& v, double p, const Eigen::VectorXd& pi,
                            const ConstraintSet& set, double T);

/// Snapshot of one agent, mainly for tests and reports.
struct AgentState {
  Eigen::VectorXd x;
  Eigen::VectorXd v;
  double p;
  double b;
  double e;
  double d;
  int set_id;
};

/// Mutable simulation state. Positions/velocities are stored row-per-agent.
struct World {
  Eigen::MatrixXd x;  // n x r
  Eigen::MatrixXd v;  // n x r
  Eigen::VectorXd p;  // current damping gains
  Eigen::VectorXd d;  // Laplacian-diagonal caps
  DelayBuffer buffers;

  int n() const { return static_cast<int>(x.rows()); }
  int r() const { return static_cast<int>(x.cols()); }
};

struct StepOutcome {
  Eigen::VectorXd e;
  Eigen::VectorXd b;
};

/// One synchronous step: all controls are computed from the frozen time-k
/// world, then every agent commits simultaneously. Weights must already be
/// normalized for this step.
StepOutcome step_world(World& world, const GraphSnapshot& g_normalized,
                       const std::vector<ConstraintSet>& sets, double T,
                       const GainPolicy& policy);

/// Same control computation without committing; used to report the gains the
/// next step would use.
StepOutcome peek_controls(const World& world, const GraphSnapshot& g_normalized,
                          const std::vector<ConstraintSet>& sets, double T);

struct StepRecord {
  int k;
  Eigen::MatrixXd x;   // n x r
  Eigen::MatrixXd v;   // n x r
  Eigen::VectorXd e;   // scaling factors computed at k
  Eigen::VectorXd p;   // damping gains in force at k
  Eigen::VectorXd b;   // derived gains computed at k
  double diameter;     // max pairwise position distance
};

struct Trajectory {
  std::vector<StepRecord> steps;  // k = 0..horizon inclusive
  std::string config_hash;
  int horizon = 0;
  int n = 0;
  int r = 0;
  double T = 0.0;
  Eigen::VectorXd d;  // per-agent caps in force

  /// Per-agent view of one recorded step.
  AgentState agent_state(int k, int i) const;
};

double position_diameter(const Eigen::MatrixXd& x);

}  // namespace vcc
