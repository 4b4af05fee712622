#pragma once

#include <Eigen/Core>

#include <optional>
#include <variant>
#include <vector>

#include "geoellipsoid/manifold.hpp"

namespace geoellipsoid {

/// f(x) = dist(x, target).
struct DistanceTo {
  Point target;
};

/// f(x) = sum_i weights_i * dist(x, anchors_i), weights > 0.
struct GeometricMedian {
  std::vector<Point> anchors;
  Eigen::VectorXd weights;
};

/// f(x) = max_i dist(x, anchors_i). Ties pick the lowest index.
struct MaxDistance {
  std::vector<Point> anchors;
};

using Objective = std::variant<DistanceTo, GeometricMedian, MaxDistance>;

/// Geodesically convex problem: minimize the objective over the closed ball
/// B(x_ref, radius). Construction validates that the ball is geodesically
/// convex (spherical: radius < (pi/2)/sqrt(K) - 1e-9), that every anchor lies
/// inside the ball, and that weights are positive.
class ProblemInstance {
 public:
  ProblemInstance(ManifoldSpec spec, Point x_ref, double radius,
                  Objective objective);

  const ManifoldSpec& spec() const { return spec_; }
  const Point& x_ref() const { return x_ref_; }
  double radius() const { return radius_; }
  const Objective& objective() const { return objective_; }

  /// Canonical frame at x_ref; anchors and results are expressed in its
  /// tangent coordinates at the serialization boundary.
  const TangentFrame& frame() const { return frame_; }

  /// Lipschitz constant M of the objective: 1 for distance and max-distance,
  /// sum of weights for the median.
  double lipschitz() const { return lipschitz_; }

 private:
  ManifoldSpec spec_;
  Point x_ref_;
  double radius_;
  Objective objective_;
  TangentFrame frame_;
  double lipschitz_;
};

/// Objective value and one subgradient at x. At a query coinciding with an
/// anchor the distance term contributes the deterministic unit vector
/// sqrt(K) * E_1 of the canonical frame at x.
struct SubgradientResult {
  double value;
  TangentVector subgradient;
};

SubgradientResult evaluate(const ProblemInstance& instance, const Point& x);

/// Ball membership with a separating subgradient on violation. `separator`
/// is the unit subgradient of h(x) = dist(x, x_ref) - radius; the halfspace
/// { z : <separator, log_x(z)> <= 0 } contains the feasible ball.
struct ConstraintResult {
  bool inside;
  std::optional<TangentVector> separator;
};

ConstraintResult constraint_oracle(const ProblemInstance& instance,
                                   const Point& x);

struct ReferenceOptimum {
  double value;
  Point minimizer;
};

/// High-accuracy optimum by a path independent of the multi-stage solver
/// wherever one exists:
///   - single-anchor objectives and two-point medians: closed form
///   - anchors on a common geodesic: dense one-dimensional search with
///     ternary refinement along that geodesic
///   - general medians: Riemannian Weiszfeld iteration driven to the
///     float-level subgradient certificate
///   - general max-distance: the multi-stage solver at target 1e-3*tolerance
/// Non-closed-form paths are cross-checked against a long projected
/// subgradient run; estimates disagreeing by more than `tolerance` throw
/// std::runtime_error.
ReferenceOptimum reference_optimum(const ProblemInstance& instance,
                                   double tolerance);

}  // namespace geoellipsoid
