#include "geoellipsoid/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace geoellipsoid {

namespace {

// Unit-subgradient fallback for a distance term evaluated at its own anchor:
// any metric-unit vector is valid there; E_1 of the canonical frame keeps it
// deterministic.
TangentVector anchor_fallback_direction(const ManifoldSpec& spec,
                                        const Point& x) {
  TangentFrame frame = orthonormal_frame(spec, x);
  return TangentVector{x, spec.sqrt_curvature() * frame.basis.col(0)};
}

constexpr double kAnchorDistanceFloor = 1e-14;

// Value and unit subgradient of x -> dist(x, anchor). `fallback` is reused
// across terms so the frame at x is built at most once per evaluate().
struct DistanceTerm {
  double value;
  Eigen::VectorXd grad;  // ambient, metric norm 1
};

DistanceTerm distance_term(const ManifoldSpec& spec, const Point& x,
                           const Point& anchor,
                           std::optional<TangentVector>& fallback) {
  const double d = dist(spec, x, anchor);
  if (d < kAnchorDistanceFloor) {
    if (!fallback.has_value()) {
      fallback = anchor_fallback_direction(spec, x);
    }
    return DistanceTerm{d, fallback->v};
  }
  const TangentVector lg = log_map(spec, x, anchor);
  return DistanceTerm{d, -lg.v / d};
}

}  // namespace

ProblemInstance::ProblemInstance(ManifoldSpec spec, Point x_ref, double radius,
                                 Objective objective)
    : spec_(spec),
      x_ref_(std::move(x_ref)),
      radius_(radius),
      objective_(std::move(objective)),
      frame_(orthonormal_frame(spec_, x_ref_)),
      lipschitz_(1.0) {
  if (!is_on_model(spec_, x_ref_.x)) {
    throw std::invalid_argument("ProblemInstance: x_ref is off the model");
  }
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw std::invalid_argument("ProblemInstance: radius must be positive");
  }
  if (spec_.kind == ManifoldKind::Spherical &&
      radius_ >= (M_PI / 2.0) / spec_.sqrt_curvature() - 1e-9) {
    throw std::invalid_argument(
        "ProblemInstance: spherical radius must stay below (pi/2)/sqrt(K) "
        "so the ball is geodesically convex");
  }

  const double anchor_tol = 1e-9 * std::max(1.0, radius_);
  auto check_anchor = [&](const Point& p) {
    if (!is_on_model(spec_, p.x)) {
      throw std::invalid_argument("ProblemInstance: anchor is off the model");
    }
    if (dist(spec_, x_ref_, p) > radius_ + anchor_tol) {
      throw std::invalid_argument(
          "ProblemInstance: anchor lies outside the feasible ball");
    }
  };

  if (const auto* obj = std::get_if<DistanceTo>(&objective_)) {
    check_anchor(obj->target);
    lipschitz_ = 1.0;
  } else if (const auto* obj = std::get_if<GeometricMedian>(&objective_)) {
    if (obj->anchors.empty()) {
      throw std::invalid_argument("ProblemInstance: median needs anchors");
    }
    if (obj->weights.size() != static_cast<Eigen::Index>(obj->anchors.size())) {
      throw std::invalid_argument(
          "ProblemInstance: median weight count must match anchor count");
    }
    for (const auto& p : obj->anchors) check_anchor(p);
    for (Eigen::Index i = 0; i < obj->weights.size(); ++i) {
      if (!(obj->weights(i) > 0.0)) {
        throw std::invalid_argument(
            "ProblemInstance: median weights must be positive");
      }
    }
    lipschitz_ = obj->weights.sum();
  } else if (const auto* obj = std::get_if<MaxDistance>(&objective_)) {
    if (obj->anchors.empty()) {
      throw std::invalid_argument("ProblemInstance: max-distance needs "
                                  "anchors");
    }
    for (const auto& p : obj->anchors) check_anchor(p);
    lipschitz_ = 1.0;
  }
}

SubgradientResult evaluate(const ProblemInstance& instance, const Point& x) {
  const ManifoldSpec& spec = instance.spec();
  std::optional<TangentVector> fallback;

  if (const auto* obj = std::get_if<DistanceTo>(&instance.objective())) {
    DistanceTerm term = distance_term(spec, x, obj->target, fallback);
    return SubgradientResult{term.value,
                             TangentVector{x, std::move(term.grad)}};
  }
  if (const auto* obj = std::get_if<GeometricMedian>(&instance.objective())) {
    double value = 0.0;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(spec.ambient_dim());
    for (std::size_t i = 0; i < obj->anchors.size(); ++i) {
      DistanceTerm term = distance_term(spec, x, obj->anchors[i], fallback);
      const double w = obj->weights(static_cast<Eigen::Index>(i));
      value += w * term.value;
      grad += w * term.grad;
    }
    return SubgradientResult{value, TangentVector{x, std::move(grad)}};
  }
  const auto& obj = std::get<MaxDistance>(instance.objective());
  std::size_t best = 0;
  double best_value = dist(spec, x, obj.anchors[0]);
  for (std::size_t i = 1; i < obj.anchors.size(); ++i) {
    const double di = dist(spec, x, obj.anchors[i]);
    if (di > best_value) {
      best_value = di;
      best = i;
    }
  }
  DistanceTerm term = distance_term(spec, x, obj.anchors[best], fallback);
  return SubgradientResult{term.value, TangentVector{x, std::move(term.grad)}};
}

ConstraintResult constraint_oracle(const ProblemInstance& instance,
                                   const Point& x) {
  const ManifoldSpec& spec = instance.spec();
  const double r = instance.radius();
  const double d = dist(spec, x, instance.x_ref());
  if (d <= r * (1.0 + 1e-12) + 1e-12) {
    return ConstraintResult{true, std::nullopt};
  }
  const TangentVector lg = log_map(spec, x, instance.x_ref());
  return ConstraintResult{false, TangentVector{x, -lg.v / d}};
}

}  // namespace geoellipsoid
