#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gamedesign/types.hpp"

namespace gamedesign {

/// One scalar convex constraint h(x) <= 0 with its gradient.
struct Constraint {
  std::string name;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

struct Box {
  Vector lower;
  Vector upper;

  int dim() const { return static_cast<int>(lower.size()); }

  bool contains(const Vector& x, double tol = 0.0) const {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
    }
    return true;
  }

  bool strictly_contains(const Vector& x) const {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] <= lower[i] || x[i] >= upper[i]) return false;
    }
    return true;
  }

  Vector clamp(const Vector& x) const {
    return x.cwiseMax(lower).cwiseMin(upper);
  }

  /// Maps a unit-cube point to the box.
  Vector from_unit(const Vector& u) const {
    return lower.array() + u.array() * (upper - lower).array();
  }
};

/// The feasible set {x : h_j(x) <= 0} together with an enclosing box hull.
/// Box facets are materialized as constraints so KKT machinery and the
/// nonvanishing-gradient probe see them like any other h_j.
class ConstraintSet {
 public:
  ConstraintSet() = default;

  /// Pure box constraint set: h's are the 2N facet inequalities.
  static ConstraintSet box(Vector lower, Vector upper);

  void add(Constraint c) { constraints_.push_back(std::move(c)); }

  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Box& box_hull() const { return box_hull_; }
  int size() const { return static_cast<int>(constraints_.size()); }

  /// max_j h_j(x); <= 0 means feasible.
  double max_violation(const Vector& x) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& c : constraints_) worst = std::max(worst, c.value(x));
    return worst;
  }

  bool feasible(const Vector& x, double tol = 0.0) const {
    return max_violation(x) <= tol;
  }

 private:
  std::vector<Constraint> constraints_;
  Box box_hull_;
};

inline ConstraintSet ConstraintSet::box(Vector lower, Vector upper) {
  ConstraintSet set;
  set.box_hull_ = Box{lower, upper};
  const int n = static_cast<int>(lower.size());
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(upper[i])) {
      double ub = upper[i];
      set.add({"x" + std::to_string(i) + "_upper",
               [i, ub](const Vector& x) { return x[i] - ub; },
               [i, n](const Vector&) {
                 Vector g = Vector::Zero(n);
                 g[i] = 1.0;
                 return g;
               }});
    }
    if (std::isfinite(lower[i])) {
      double lb = lower[i];
      set.add({"x" + std::to_string(i) + "_lower",
               [i, lb](const Vector& x) { return lb - x[i]; },
               [i, n](const Vector&) {
                 Vector g = Vector::Zero(n);
                 g[i] = -1.0;
                 return g;
               }});
    }
  }
  return set;
}

}  // namespace gamedesign
