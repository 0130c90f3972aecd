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

#include "vcc/graph.hpp"

#include <algorithm>
#include <string>

#include "vcc/rng.hpp"

namespace vcc {

void GraphSnapshot::add_edge(int src, int dst, double weight, int delay) {
  const int size = n();
  if (src < 0 || src >= size || dst < 0 || dst >= size) {
    throw ValidationError("edge endpoint out of range");
  }
  if (src == dst) throw ValidationError("self-loops are not allowed");
  weights(dst, src) = weight;
  delays(dst, src) = delay;
}

void GraphSnapshot::validate(double weight_floor, int delay_bound) const {
  const int size = n();
  if (weights.cols() != size || delays.rows() != size || delays.cols() != size) {
    throw InconsistentDimensions("snapshot matrices must be square and matching");
  }
  for (int i = 0; i < size; ++i) {
    if (weights(i, i) != 0.0) throw ValidationError("nonzero diagonal weight");
    for (int j = 0; j < size; ++j) {
      const double a = weights(i, j);
      if (a < 0.0) throw ValidationError("negative edge weight");
      if (a > 0.0) {
        if (a < weight_floor) {
          throw ValidationError("edge weight " + std::to_string(a) + " below the floor " +
                                std::to_string(weight_floor));
        }
        if (delays(i, j) < 0 || delays(i, j) > delay_bound) {
          throw ValidationError("edge delay outside [0, delay bound]");
        }
      }
    }
  }
}

Eigen::MatrixXd laplacian(const GraphSnapshot& g) {
  Eigen::MatrixXd lap = -g.weights;
  lap.diagonal() = g.weights.rowwise().sum();
  return lap;
}

GraphSnapshot union_graph(const std::vector<GraphSnapshot>& snapshots) {
  if (snapshots.empty()) throw ValidationError("union of an empty snapshot list");
  const int n = snapshots.front().n();
  GraphSnapshot result = GraphSnapshot::empty(n);
  for (const auto& g : snapshots) {
    if (g.n() != n) throw InconsistentDimensions("snapshots disagree on agent count");
    result.weights = result.weights.cwiseMax(g.weights);
  }
  return result;
}

namespace {

// Iterative Tarjan SCC over the adjacency implied by positive weights.
// Edge (j, i) with weights(i, j) > 0 is traversed as j -> i.
std::vector<int> scc_components(const GraphSnapshot& g, int& num_components) {
  const int n = g.n();
  std::vector<std::vector<int>> out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (g.weights(i, j) > 0.0) out[j].push_back(i);
    }
  }
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0;
  num_components = 0;

  struct Frame {
    int v;
    std::size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < out[f.v].size()) {
        const int w = out[f.v][f.edge++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          while (true) {
            const int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = num_components;
            if (w == f.v) break;
          }
          ++num_components;
        }
        const int finished = f.v;
        call.pop_back();
        if (!call.empty()) {
          low[call.back().v] = std::min(low[call.back().v], low[finished]);
        }
      }
    }
  }
  return comp;
}

}  // namespace

SpanningTreeResult has_directed_spanning_tree(const GraphSnapshot& g) {
  const int n = g.n();
  if (n == 1) return SpanningTreeResult{true, {0}};
  int num_components = 0;
  const std::vector<int> comp = scc_components(g, num_components);

  // A component is a source iff no edge enters it from outside. In the
  // condensation DAG every node descends from some source, so a unique
  // source reaches everything.
  std::vector<bool> has_external_in(num_components, false);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (g.weights(i, j) > 0.0 && comp[j] != comp[i]) {
        has_external_in[comp[i]] = true;
      }
    }
  }
  int sources = 0;
  int source_comp = -1;
  for (int c = 0; c < num_components; ++c) {
    if (!has_external_in[c]) {
      ++sources;
      source_comp = c;
    }
  }
  SpanningTreeResult result{sources == 1, {}};
  if (result.has_tree) {
    for (int v = 0; v < n; ++v) {
      if (comp[v] == source_comp) result.roots.insert(v);
    }
  }
  return result;
}

GraphSchedule::GraphSchedule(std::vector<GraphSnapshot> snapshots, int window_length, int eta,
                             double weight_floor, int delay_bound) {
  if (snapshots.empty()) throw ValidationError("schedule needs at least one snapshot");
  if (window_length < 1 || eta < 1) throw ValidationError("window length and eta must be positive");
  n_ = snapshots.front().n();
  for (const auto& g : snapshots) {
    if (g.n() != n_) throw InconsistentDimensions("snapshots disagree on agent count");
    g.validate(weight_floor, delay_bound);
  }
  snapshots_ = std::move(snapshots);
  window_length_ = window_length;
  eta_ = eta;
  weight_floor_ = weight_floor;
  delay_bound_ = delay_bound;
}

GraphSchedule GraphSchedule::seeded_random(std::uint64_t seed, int n, int window_length, int eta,
                                           double weight_floor, int delay_bound, int extra_edges,
                                           double weight_min, double weight_max) {
  if (n < 2) throw ValidationError("random schedule needs at least two agents");
  if (window_length < 1 || eta < 1) throw ValidationError("window length and eta must be positive");
  GraphSchedule s;
  s.n_ = n;
  s.window_length_ = window_length;
  s.eta_ = eta;
  s.weight_floor_ = weight_floor;
  s.delay_bound_ = delay_bound;
  s.random_ = true;
  s.seed_ = seed;
  s.extra_edges_ = extra_edges;
  s.weight_min_ = std::max(weight_min, weight_floor);
  s.weight_max_ = std::max(weight_max, s.weight_min_);
  return s;
}

GraphSnapshot GraphSchedule::at(int k) const {
  if (k < 0) throw ValidationError("negative time index");
  if (!random_) {
    return snapshots_[static_cast<std::size_t>(k) % snapshots_.size()];
  }
  // Window-local generation keyed on (seed, window) so any step can be
  // queried independently and reproducibly.
  const int window = k / window_length_;
  const int offset = k % window_length_;
  Rng rng(Rng::derive(seed_, static_cast<std::uint64_t>(window)));

  std::vector<GraphSnapshot> steps(window_length_, GraphSnapshot::empty(n_));
  // Random arborescence: attach each node (in shuffled order) to a random
  // earlier node, then assign each tree edge to a random step of the window.
  std::vector<int> order(n_);
  for (int i = 0; i < n_; ++i) order[i] = i;
  for (int i = n_ - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(0, i)]);
  for (int i = 1; i < n_; ++i) {
    const int child = order[i];
    const int parent = order[rng.uniform_int(0, i - 1)];
    const int step = rng.uniform_int(0, window_length_ - 1);
    const double w = rng.uniform(weight_min_, weight_max_);
    const int delay = rng.uniform_int(0, delay_bound_);
    steps[step].add_edge(parent, child, w, delay);
  }
  for (int e = 0; e < extra_edges_; ++e) {
    const int src = rng.uniform_int(0, n_ - 1);
    int dst = rng.uniform_int(0, n_ - 2);
    if (dst >= src) ++dst;
    const int step = rng.uniform_int(0, window_length_ - 1);
    const double w = rng.uniform(weight_min_, weight_max_);
    const int delay = rng.uniform_int(0, delay_bound_);
    steps[step].add_edge(src, dst, w, delay);
  }
  return steps[offset];
}

bool verify_joint_connectivity(const GraphSchedule& schedule, int horizon) {
  if (schedule.window_length() > schedule.eta()) {
    throw WindowBoundViolation("window length exceeds eta");
  }
  const int windows = schedule.complete_windows(horizon);
  if (windows < 1) throw ValidationError("horizon does not cover a full window");
  for (int m = 0; m < windows; ++m) {
    std::vector<GraphSnapshot> window;
    for (int k = schedule.window_start(m); k < schedule.window_start(m + 1); ++k) {
      window.push_back(schedule.at(k));
    }
    if (!has_directed_spanning_tree(union_graph(window)).has_tree) return false;
  }
  return true;
}

std::vector<int> greedy_window_decomposition(const std::vector<GraphSnapshot>& snapshots, int eta) {
  std::vector<int> starts;
  int k = 0;
  const int horizon = static_cast<int>(snapshots.size());
  while (k < horizon) {
    bool found = false;
    std::vector<GraphSnapshot> window;
    for (int len = 1; len <= eta && k + len <= horizon; ++len) {
      window.push_back(snapshots[k + len - 1]);
      if (has_directed_spanning_tree(union_graph(window)).has_tree) {
        starts.push_back(k);
        k += len;
        found = true;
        break;
      }
    }
    if (!found) {
      if (horizon - k < eta) break;  // incomplete tail, not a failure
      return {};
    }
  }
  return starts;
}

}  // namespace vcc
