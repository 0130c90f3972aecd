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

#include "vcc/constraint_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vcc/rng.hpp"

namespace vcc {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Closed interval [lo, hi] of ray parameters t with t*direction inside a set.
struct Interval {
  double lo;
  double hi;
};

constexpr int kBisectionSteps = 60;

double box_bounding_radius(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  return lower.cwiseAbs().cwiseMax(upper.cwiseAbs()).norm();
}

}  // namespace

ConstraintSet ConstraintSet::finish(Node node) {
  auto set = ConstraintSet(std::make_shared<const Node>(std::move(node)));
  if (!set.contains(Eigen::VectorXd::Zero(set.dimension()))) {
    throw ValidationError("constraint set does not contain the origin");
  }
  return set;
}

ConstraintSet ConstraintSet::ball(double radius, int dimension) {
  if (!(radius > 0.0)) throw ValidationError("ball radius must be positive");
  if (dimension < 1) throw ValidationError("dimension must be positive");
  return finish(Node{dimension, radius, true, Ball{radius}});
}

ConstraintSet ConstraintSet::axis_box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  if (lower.size() != upper.size() || lower.size() < 1) {
    throw ValidationError("box bounds must share a positive dimension");
  }
  if ((lower.array() > upper.array()).any()) {
    throw ValidationError("box has lower > upper");
  }
  const int dim = static_cast<int>(lower.size());
  const double bound = box_bounding_radius(lower, upper);
  return finish(Node{dim, bound, true, AxisBox{std::move(lower), std::move(upper)}});
}

ConstraintSet ConstraintSet::set_union(std::vector<ConstraintSet> members) {
  if (members.empty()) throw ValidationError("union needs at least one member");
  const int dim = members.front().dimension();
  double bound = 0.0;
  bool analytic = true;
  for (const auto& m : members) {
    if (m.dimension() != dim) throw InconsistentDimensions("union members disagree on dimension");
    bound = std::max(bound, m.bounding_radius());
    analytic = analytic && m.analytic();
  }
  return finish(Node{dim, bound, analytic, Union{std::move(members)}});
}

ConstraintSet ConstraintSet::set_intersection(std::vector<ConstraintSet> members) {
  if (members.empty()) throw ValidationError("intersection needs at least one member");
  const int dim = members.front().dimension();
  double bound = std::numeric_limits<double>::infinity();
  bool analytic = true;
  for (const auto& m : members) {
    if (m.dimension() != dim) {
      throw InconsistentDimensions("intersection members disagree on dimension");
    }
    bound = std::min(bound, m.bounding_radius());
    analytic = analytic && m.analytic();
  }
  return finish(Node{dim, bound, analytic, Intersection{std::move(members)}});
}

ConstraintSet ConstraintSet::sampled(MembershipFn member, double bounding_radius, int dimension) {
  if (!member) throw ValidationError("sampled set needs a membership predicate");
  if (!(bounding_radius > 0.0)) throw ValidationError("bounding radius must be positive");
  if (dimension < 1) throw ValidationError("dimension must be positive");
  return finish(Node{dimension, bounding_radius, false, SampledOracle{std::move(member), bounding_radius}});
}

bool ConstraintSet::contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != dimension()) throw InconsistentDimensions("point dimension mismatch");
  const Shape& s = node_->shape;
  if (const auto* b = std::get_if<Ball>(&s)) {
    return x.norm() <= b->radius + kMembershipTol;
  }
  if (const auto* box = std::get_if<AxisBox>(&s)) {
    return (x.array() >= box->lower.array() - kMembershipTol).all() &&
           (x.array() <= box->upper.array() + kMembershipTol).all();
  }
  if (const auto* u = std::get_if<Union>(&s)) {
    for (const auto& m : u->members) {
      if (m.contains(x)) return true;
    }
    return false;
  }
  if (const auto* inter = std::get_if<Intersection>(&s)) {
    for (const auto& m : inter->members) {
      if (!m.contains(x)) return false;
    }
    return true;
  }
  const auto& oracle = std::get<SampledOracle>(s);
  return oracle.member(x);
}

namespace {

// Ray-parameter intervals of membership along t * direction, t >= 0.
// Only defined for analytic shapes.
std::vector<Interval> ray_intervals(const ConstraintSet& set, const Eigen::VectorXd& dir) {
  const auto& shape = set.shape();
  if (const auto* b = std::get_if<ConstraintSet::Ball>(&shape)) {
    return {Interval{0.0, b->radius}};
  }
  if (const auto* box = std::get_if<ConstraintSet::AxisBox>(&shape)) {
    // Slab clipping per axis against the exact bounds. Reach values land on
    // the true boundary; the membership tolerance then accepts them.
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int a = 0; a < dir.size(); ++a) {
      const double d = dir[a];
      const double l = box->lower[a];
      const double u = box->upper[a];
      if (d == 0.0) {
        if (l > kMembershipTol || u < -kMembershipTol) return {};
        continue;
      }
      double t0 = l / d;
      double t1 = u / d;
      if (t0 > t1) std::swap(t0, t1);
      lo = std::max(lo, t0);
      hi = std::min(hi, t1);
    }
    if (lo > hi) return {};
    return {Interval{lo, hi}};
  }
  if (const auto* u = std::get_if<ConstraintSet::Union>(&shape)) {
    std::vector<Interval> merged;
    for (const auto& m : u->members) {
      auto sub = ray_intervals(m, dir);
      merged.insert(merged.end(), sub.begin(), sub.end());
    }
    return merged;
  }
  const auto& inter = std::get<ConstraintSet::Intersection>(shape);
  // Pairwise interval-set intersection across members.
  std::vector<Interval> acc = ray_intervals(inter.members.front(), dir);
  for (std::size_t mi = 1; mi < inter.members.size() && !acc.empty(); ++mi) {
    auto other = ray_intervals(inter.members[mi], dir);
    std::vector<Interval> next;
    for (const auto& a : acc) {
      for (const auto& b : other) {
        const double lo = std::max(a.lo, b.lo);
        const double hi = std::min(a.hi, b.hi);
        if (lo <= hi) next.push_back(Interval{lo, hi});
      }
    }
    acc = std::move(next);
  }
  return acc;
}

// Largest beta with [0, beta] covered by the interval set; gaps up to
// kMembershipTol are bridged (closed sets meeting at a point).
double coverage_from_origin(std::vector<Interval> intervals, double cap) {
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double covered = 0.0;
  for (const auto& iv : intervals) {
    if (iv.lo > covered + kMembershipTol) break;
    covered = std::max(covered, iv.hi);
    if (covered >= cap) return cap;
  }
  return std::min(covered, cap);
}

double sampled_reach(const ConstraintSet& set, const Eigen::VectorXd& dir, double resolution) {
  const double cap = set.bounding_radius();
  const auto member_at = [&](double t) { return set.contains((t * dir).eval()); };

  // Forward march until the first non-member sample, then bisect the
  // bracket. lo only advances past verified members, so a predicate that is
  // empty along the ray yields reach 0.
  double lo = 0.0;
  double t = resolution;
  bool bracketed = false;
  double hi = cap;
  while (t < cap) {
    if (!member_at(t)) {
      hi = t;
      bracketed = true;
      break;
    }
    lo = t;
    t += resolution;
  }
  if (!bracketed) {
    if (member_at(cap)) return cap;
    hi = cap;
  }
  for (int i = 0; i < kBisectionSteps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (member_at(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

double reach(const ConstraintSet& set, const Eigen::Ref<const Eigen::VectorXd>& direction,
             double resolution) {
  if (direction.size() != set.dimension()) {
    throw InconsistentDimensions("direction dimension mismatch");
  }
  if (std::abs(direction.norm() - 1.0) > 1e-9) {
    throw NonUnitDirection("reach() requires a unit direction");
  }
  if (!(resolution > 0.0)) throw ValidationError("resolution must be positive");

  const Eigen::VectorXd dir = direction;
  const double beta = set.analytic()
                          ? coverage_from_origin(ray_intervals(set, dir), set.bounding_radius())
                          : sampled_reach(set, dir, resolution);
  if (!(beta > 0.0)) {
    throw EmptyReach("radial reach is not strictly positive");
  }
  return beta;
}

double reach(const ConstraintSet& set, const Eigen::Ref<const Eigen::VectorXd>& direction) {
  return reach(set, direction, 1e-4 * set.bounding_radius());
}

ConstrainedVector scale_into_set(const ConstraintSet& set,
                                 const Eigen::Ref<const Eigen::VectorXd>& x) {
  ConstrainedVector result;
  result.input = x;
  const double norm = x.norm();
  if (norm == 0.0) {
    result.output = Eigen::VectorXd::Zero(x.size());
    result.e = 1.0;
    return result;
  }
  const Eigen::VectorXd dir = x / norm;
  const double beta = reach(set, dir);
  if (beta >= norm) {
    result.output = x;
    result.e = 1.0;
  } else {
    result.e = beta / norm;
    result.output = result.e * x;
  }
  return result;
}

std::vector<Eigen::VectorXd> direction_grid(int dimension, int num_directions) {
  if (dimension < 1) throw ValidationError("dimension must be positive");
  if (num_directions < 2) throw ValidationError("need at least two directions");
  std::vector<Eigen::VectorXd> dirs;
  if (dimension == 1) {
    dirs.push_back(Eigen::VectorXd::Constant(1, 1.0));
    dirs.push_back(Eigen::VectorXd::Constant(1, -1.0));
    return dirs;
  }
  dirs.reserve(num_directions);
  if (dimension == 2) {
    // Golden-angle sequence: quasi-uniform and reproducible for any count.
    const double golden = 0.6180339887498948482045868343656;
    for (int j = 0; j < num_directions; ++j) {
      const double frac = std::fmod(static_cast<double>(j) * golden, 1.0);
      const double theta = kTwoPi * frac;
      dirs.push_back((Eigen::VectorXd(2) << std::cos(theta), std::sin(theta)).finished());
    }
    return dirs;
  }
  // Fixed-seed normalized draws for r >= 3; deterministic by construction.
  Rng rng(0x5eedd1ec7ULL + static_cast<std::uint64_t>(dimension));
  while (static_cast<int>(dirs.size()) < num_directions) {
    Eigen::VectorXd v(dimension);
    for (int a = 0; a < dimension; ++a) v[a] = rng.normal();
    const double n = v.norm();
    if (n > 1e-12) dirs.push_back(v / n);
  }
  return dirs;
}

RhoBounds estimate_rho_bounds(const ConstraintSet& set, int num_directions) {
  const auto dirs = direction_grid(set.dimension(), num_directions);
  RhoBounds bounds{0.0, std::numeric_limits<double>::infinity()};
  for (const auto& dir : dirs) {
    const double beta = reach(set, dir);  // throws EmptyReach on failure
    bounds.rho_bar = std::max(bounds.rho_bar, beta);
    bounds.rho_under = std::min(bounds.rho_under, beta);
  }
  return bounds;
}

}  // namespace vcc
