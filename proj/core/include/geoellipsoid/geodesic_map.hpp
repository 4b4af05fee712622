#pragma once

#include <Eigen/Core>

#include <optional>

#include "geoellipsoid/cut.hpp"
#include "geoellipsoid/manifold.hpp"

namespace geoellipsoid {

/// Chart centered at a base point that maps geodesics to straight lines:
/// the projective ball chart of hyperbolic space (image = open unit ball)
/// and the central projection chart of an open hemisphere (image = R^d).
///
/// Because geodesics map to lines, geodesically convex sets map to convex
/// sets and Riemannian halfspace cuts map to affine halfspace cuts, which is
/// what makes Euclidean cutting-plane machinery applicable on the manifold.
///
/// Chart coordinates are dimensionless (unit-curvature scale): a point at
/// metric distance s from the base lands at Euclidean radius
/// tanh(s*sqrt(K)) (hyperbolic) or tan(s*sqrt(K)) (spherical).
class GeodesicMap {
 public:
  /// Uses the canonical deterministic frame at `base`.
  GeodesicMap(const ManifoldSpec& spec, Point base);
  GeodesicMap(const ManifoldSpec& spec, TangentFrame frame);

  const ManifoldSpec& spec() const { return spec_; }
  const Point& base() const { return frame_.base; }
  const TangentFrame& frame() const { return frame_; }

  /// Chart coordinates of p. Spherical points must satisfy the hemisphere
  /// condition <p, base> > 1e-9; violations throw std::domain_error.
  /// forward(base) is exactly zero.
  Eigen::VectorXd forward(const Point& p) const;

  /// Inverse chart. Hyperbolic requires |y| < 1 - 1e-12 (throws
  /// std::domain_error at the ball boundary); spherical accepts any y.
  /// inverse(0) is exactly the base point.
  Point inverse(const Eigen::VectorXd& y) const;

  /// Columns are the ambient partial derivatives of inverse() at y.
  Eigen::MatrixXd inverse_jacobian(const Eigen::VectorXd& y) const;

  /// Pulls a Riemannian subgradient g at inverse(y) back to a chart cut
  /// through y: normal_i = <g, d(inverse)/dy_i> in the model inner product,
  /// normalized to unit length. Sign of <normal, phi(x) - y> agrees with the
  /// sign of <g, log_{inverse(y)}(x)> for every x in the chart domain.
  /// Throws std::domain_error when the pulled-back normal is degenerate
  /// (|n| < 1e-14 before normalization).
  EuclideanCut pullback_subgradient(const Eigen::VectorXd& y,
                                    const TangentVector& g,
                                    CutKind kind) const;

  /// Like pullback_subgradient, but reports degeneracy as std::nullopt.
  /// Within the chart ball the pullback is bounded below by a fixed
  /// multiple of |g|, so nullopt certifies that g itself is float noise.
  std::optional<EuclideanCut> try_pullback_subgradient(
      const Eigen::VectorXd& y, const TangentVector& g, CutKind kind) const;

  /// Euclidean radius of the chart image of the metric ball
  /// B(base, radius): tanh(radius*sqrt(K)) or tan(radius*sqrt(K)).
  /// `radius` is in metric length units; spherical requires
  /// radius*sqrt(K) < pi/2.
  double ball_image_radius(double radius) const;

 private:
  ManifoldSpec spec_;
  TangentFrame frame_;
};

}  // namespace geoellipsoid
