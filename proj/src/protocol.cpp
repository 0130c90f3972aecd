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

#include "vcc/protocol.hpp"

#include <cmath>
#include <string>

namespace vcc {

GainDesign design_initial_gains(double T, const Eigen::VectorXd& requested_p0,
                                double safety_margin) {
  if (!(T > 0.0)) throw ValidationError("sampling period must be positive");
  if (!(safety_margin > 0.0 && safety_margin < 1.0)) {
    throw ValidationError("safety margin must lie in (0, 1)");
  }
  GainDesign design;
  design.p0 = requested_p0;
  design.d.resize(requested_p0.size());
  for (int i = 0; i < requested_p0.size(); ++i) {
    const double p0 = requested_p0[i];
    if (!(p0 > 0.0) || !(p0 * T < 1.0)) {
      throw GainOutOfRange("agent " + std::to_string(i + 1) + ": p0*T = " +
                           std::to_string(p0 * T) + " outside (0, 1)");
    }
    design.d[i] = 0.25 * p0 * p0 * (1.0 - safety_margin);
  }
  return design;
}

GraphSnapshot normalize_weights(const GraphSnapshot& g, const Eigen::VectorXd& d,
                                double weight_floor) {
  if (d.size() != g.n()) throw InconsistentDimensions("cap vector does not match agent count");
  GraphSnapshot out = g;
  for (int i = 0; i < g.n(); ++i) {
    const double row_sum = g.weights.row(i).sum();
    if (row_sum <= d[i] || row_sum == 0.0) continue;
    const double scale = d[i] / row_sum;
    for (int j = 0; j < g.n(); ++j) {
      if (g.weights(i, j) > 0.0) {
        const double scaled = g.weights(i, j) * scale;
        if (scaled < weight_floor) {
          throw FloorConflict("row " + std::to_string(i + 1) +
                              ": normalization would push a weight below the floor");
        }
        out.weights(i, j) = scaled;
      }
    }
  }
  return out;
}

GainPolicy GainPolicy::b_prev() {
  return GainPolicy("b_prev", [](double, double b, double) { return b; });
}

GainPolicy GainPolicy::midpoint() {
  return GainPolicy("midpoint", [](double, double b, double T) { return 0.5 * (b + 1.0 / T); });
}

GainPolicy GainPolicy::custom(std::string name, Fn fn) {
  return GainPolicy(std::move(name), std::move(fn));
}

GainPolicy GainPolicy::by_name(const std::string& name) {
  if (name == "b_prev") return b_prev();
  if (name == "midpoint") return midpoint();
  throw ValidationError("unknown gain policy: " + name);
}

double update_gain(double p_current, double b_current, double T, const GainPolicy& policy) {
  if (!(b_current > 0.0) || !(b_current * T < 1.0)) {
    throw GainOutOfRange("b*T outside (0, 1)");
  }
  const double p_next = policy(p_current, b_current, T);
  if (!(p_next >= b_current) || !(p_next * T < 1.0)) {
    throw PolicyViolation("policy '" + policy.name() + "' returned p_next outside [b, 1/T)");
  }
  return p_next;
}

DelayBuffer::DelayBuffer(Eigen::MatrixXd x0, int depth) {
  if (depth < 1) throw ValidationError("buffer depth must be positive");
  ring_.assign(static_cast<std::size_t>(depth), x0);
}

const Eigen::MatrixXd& DelayBuffer::at_age(int age) const {
  if (age < 0 || age >= depth()) {
    throw BufferUnderflow("requested age " + std::to_string(age) + " with depth " +
                          std::to_string(depth()));
  }
  return ring_[static_cast<std::size_t>((head_ + age) % depth())];
}

void DelayBuffer::push(const Eigen::MatrixXd& x_new) {
  head_ = (head_ + depth() - 1) % depth();
  ring_[static_cast<std::size_t>(head_)] = x_new;
}

Eigen::VectorXd consensus_term(int i, const GraphSnapshot& g, const DelayBuffer& buffers,
                               double T) {
  const Eigen::MatrixXd& current = buffers.at_age(0);
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(current.cols());
  for (int j = 0; j < g.n(); ++j) {
    const double a = g.weights(i, j);
    if (a == 0.0) continue;
    const Eigen::MatrixXd& delayed = buffers.at_age(g.delays(i, j));
    pi += a * (delayed.row(j) - current.row(i)).transpose();
  }
  return pi * T;
}

ControlResult control_input(const Eigen::VectorXd& v, double p, const Eigen::VectorXd& pi,
                            const ConstraintSet& set, double T) {
  const Eigen::VectorXd w = v - p * T * v + pi;
  const ConstrainedVector constrained = scale_into_set(set, w);
  ControlResult result;
  result.u = constrained.output;
  result.e = constrained.e;
  result.b = (1.0 - result.e * (1.0 - p * T)) / T;
  return result;
}

namespace {

StepOutcome compute_controls(const World& world, const GraphSnapshot& g,
                             const std::vector<ConstraintSet>& sets, double T,
                             Eigen::MatrixXd* u_out) {
  const int n = world.n();
  StepOutcome outcome;
  outcome.e.resize(n);
  outcome.b.resize(n);
  if (u_out) u_out->resize(n, world.r());
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd pi = consensus_term(i, g, world.buffers, T);
    const ControlResult c = control_input(world.v.row(i).transpose(), world.p[i], pi, sets[i], T);
    outcome.e[i] = c.e;
    outcome.b[i] = c.b;
    if (u_out) u_out->row(i) = c.u.transpose();
  }
  return outcome;
}

}  // namespace

StepOutcome peek_controls(const World& world, const GraphSnapshot& g_normalized,
                          const std::vector<ConstraintSet>& sets, double T) {
  return compute_controls(world, g_normalized, sets, T, nullptr);
}

StepOutcome step_world(World& world, const GraphSnapshot& g_normalized,
                       const std::vector<ConstraintSet>& sets, double T,
                       const GainPolicy& policy) {
  Eigen::MatrixXd u;
  StepOutcome outcome = compute_controls(world, g_normalized, sets, T, &u);
  world.x += T * world.v;
  world.v = u;
  for (int i = 0; i < world.n(); ++i) {
    world.p[i] = update_gain(world.p[i], outcome.b[i], T, policy);
  }
  world.buffers.push(world.x);
  return outcome;
}

AgentState Trajectory::agent_state(int k, int i) const {
  if (k < 0 || k >= static_cast<int>(steps.size()) || i < 0 || i >= n) {
    throw InconsistentDimensions("agent_state index out of range");
  }
  const StepRecord& rec = steps[static_cast<std::size_t>(k)];
  return AgentState{rec.x.row(i).transpose(), rec.v.row(i).transpose(),
                    rec.p[i],                rec.b[i],
                    rec.e[i],                d.size() == n ? d[i] : 0.0,
                    i};
}

double position_diameter(const Eigen::MatrixXd& x) {
  double diameter = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = i + 1; j < x.rows(); ++j) {
      diameter = std::max(diameter, (x.row(i) - x.row(j)).norm());
    }
  }
  return diameter;
}

}  // namespace vcc
