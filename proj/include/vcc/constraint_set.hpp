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
#include <memory>
#include <variant>
#include <vector>

#include "vcc/errors.hpp"

namespace vcc {

/// Points within this distance of an analytic boundary count as members
/// (the sets are closed; a hard cutoff would flap at the reach value).
inline constexpr double kMembershipTol = 1e-9;

/// A bounded closed velocity-constraint set containing the origin.
///
/// Shapes are balls, axis-aligned boxes, unions and intersections of those,
/// plus an opaque membership predicate with a declared bounding radius.
/// Values are immutable and cheap to copy (shared internal node), so they
/// can be queried concurrently without synchronization.
class ConstraintSet {
 public:
  using MembershipFn = std::function<bool(const Eigen::VectorXd&)>;

  struct Ball {
    double radius;
  };
  struct AxisBox {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
  };
  struct Union {
    std::vector<ConstraintSet> members;
  };
  struct Intersection {
    std::vector<ConstraintSet> members;
  };
  struct SampledOracle {
    MembershipFn member;
    double bounding_radius;
  };
  using Shape = std::variant<Ball, AxisBox, Union, Intersection, SampledOracle>;

  static ConstraintSet ball(double radius, int dimension);
  static ConstraintSet axis_box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static ConstraintSet set_union(std::vector<ConstraintSet> members);
  static ConstraintSet set_intersection(std::vector<ConstraintSet> members);
  static ConstraintSet sampled(MembershipFn member, double bounding_radius, int dimension);

  int dimension() const { return node_->dimension; }
  const Shape& shape() const { return node_->shape; }

  /// Membership contains ≤ bounding_radius by construction.
  double bounding_radius() const { return node_->bounding_radius; }

  /// True when reach can be computed by exact ray-interval arithmetic
  /// (no SampledOracle anywhere in the shape tree).
  bool analytic() const { return node_->analytic; }

  /// Membership test; analytic boundaries use kMembershipTol slack.
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  struct Node {
    int dimension;
    double bounding_radius;
    bool analytic;
    Shape shape;
  };
  explicit ConstraintSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static ConstraintSet finish(Node node);

  std::shared_ptr<const Node> node_;
};

/// Result of applying the constraint operator: output = e * input with the
/// whole segment [0, output] inside the set, e in (0, 1], and e == 1 exactly
/// when no truncation occurred.
struct ConstrainedVector {
  Eigen::VectorXd input;
  Eigen::VectorXd output;
  double e;
};

struct RhoBounds {
  double rho_bar;    // largest segment-reachable magnitude over sampled directions
  double rho_under;  // smallest radial reach over sampled directions
};

/// Largest beta <= bounding radius such that alpha*beta*direction is a member
/// for every alpha in [0,1]. Exact for analytic shapes; SampledOracle shapes
/// use forward sampling at step <= resolution followed by bisection.
///
/// Throws NonUnitDirection unless |direction| = 1 within 1e-9, and EmptyReach
/// when the computed reach is not strictly positive.
double reach(const ConstraintSet& set, const Eigen::Ref<const Eigen::VectorXd>& direction,
             double resolution);

/// reach() at the default resolution of 1e-4 x bounding radius.
double reach(const ConstraintSet& set, const Eigen::Ref<const Eigen::VectorXd>& direction);

/// The constraint operator: scales x radially to the largest magnitude whose
/// full segment from the origin stays inside the set. Zero maps to zero with
/// e = 1.
ConstrainedVector scale_into_set(const ConstraintSet& set,
                                 const Eigen::Ref<const Eigen::VectorXd>& x);

/// Deterministic quasi-uniform direction grid: {+1,-1} for r = 1,
/// golden-angle samples for r = 2, normalized low-discrepancy draws above.
std::vector<Eigen::VectorXd> direction_grid(int dimension, int num_directions);

/// Extreme radial reaches over a deterministic direction grid.
/// Throws EmptyReach if any sampled direction has reach <= 0.
RhoBounds estimate_rho_bounds(const ConstraintSet& set, int num_directions);

}  // namespace vcc
