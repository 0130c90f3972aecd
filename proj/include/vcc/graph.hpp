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
#include <set>
#include <vector>

#include "vcc/errors.hpp"

namespace vcc {

/// Weighted directed communication graph at one time step.
///
/// weights(i, j) is the weight of edge (j, i): agent i receives from agent j.
/// delays(i, j) is the matching communication delay in steps; it is only
/// meaningful where weights(i, j) > 0.
struct GraphSnapshot {
  Eigen::MatrixXd weights;
  Eigen::MatrixXi delays;

  int n() const { return static_cast<int>(weights.rows()); }

  static GraphSnapshot empty(int n) {
    return GraphSnapshot{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXi::Zero(n, n)};
  }

  /// Adds/overwrites a directed edge src -> dst (0-based).
  void add_edge(int src, int dst, double weight, int delay);

  /// Checks the per-snapshot invariants against the schedule-wide constants:
  /// zero diagonal, nonzero weights >= weight_floor, delays in [0, delay_bound].
  void validate(double weight_floor, int delay_bound) const;
};

/// Directed-graph Laplacian: diagonal entry i is the weight sum into i,
/// off-diagonal (i, j) is -weights(i, j). Rows sum to zero.
Eigen::MatrixXd laplacian(const GraphSnapshot& g);

/// Connectivity-only union: an edge is present iff present in any snapshot
/// (weight is the max over snapshots, delays are reset to zero).
GraphSnapshot union_graph(const std::vector<GraphSnapshot>& snapshots);

struct SpanningTreeResult {
  bool has_tree;
  std::set<int> roots;  // every node with directed paths to all others
};

/// Spanning-tree test via strongly-connected-component condensation: a
/// directed spanning tree exists iff the condensation has a unique source
/// component, and the roots are exactly that component's nodes.
SpanningTreeResult has_directed_spanning_tree(const GraphSnapshot& g);

/// Switching graph sequence with a declared joint-connectivity window
/// structure (window m covers steps [window_start(m), window_start(m+1))).
class GraphSchedule {
 public:
  /// Periodic rotation over an explicit snapshot list.
  GraphSchedule(std::vector<GraphSnapshot> snapshots, int window_length, int eta,
                double weight_floor, int delay_bound);

  /// Seeded random switching: each window receives a random spanning
  /// arborescence spread over its steps plus optional extra edges, all drawn
  /// deterministically from (seed, window index). Weights are drawn from
  /// [weight_min, weight_max] with weight_min >= weight_floor, leaving room
  /// for row normalization above the floor.
  static GraphSchedule seeded_random(std::uint64_t seed, int n, int window_length, int eta,
                                     double weight_floor, int delay_bound, int extra_edges,
                                     double weight_min, double weight_max);

  int n() const { return n_; }
  int eta() const { return eta_; }
  int delay_bound() const { return delay_bound_; }
  double weight_floor() const { return weight_floor_; }
  int window_length() const { return window_length_; }

  GraphSnapshot at(int k) const;
  int window_start(int m) const { return m * window_length_; }
  /// Number of complete windows inside [0, horizon).
  int complete_windows(int horizon) const { return horizon / window_length_; }

 private:
  GraphSchedule() = default;

  int n_ = 0;
  int window_length_ = 1;
  int eta_ = 1;
  double weight_floor_ = 0.0;
  int delay_bound_ = 0;
  bool random_ = false;
  std::uint64_t seed_ = 0;
  int extra_edges_ = 0;
  double weight_min_ = 0.0;
  double weight_max_ = 1.0;
  std::vector<GraphSnapshot> snapshots_;  // periodic mode: k -> snapshots[k % size]
};

/// True iff every complete window inside the horizon has a jointly
/// spanning-tree union. Throws WindowBoundViolation if the declared window
/// length exceeds eta.
bool verify_joint_connectivity(const GraphSchedule& schedule, int horizon);

/// Greedy window recovery for a schedule without a declared decomposition:
/// from each start, take the shortest prefix (at most eta steps) whose union
/// has a spanning tree. Returns the window starts k_0 = 0 < k_1 < ... covering
/// the horizon, or an empty vector if no decomposition exists.
std::vector<int> greedy_window_decomposition(const std::vector<GraphSnapshot>& snapshots, int eta);

}  // namespace vcc
