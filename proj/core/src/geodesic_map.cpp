#include "geoellipsoid/geodesic_map.hpp"

#include <cmath>
#include <stdexcept>

namespace geoellipsoid {

GeodesicMap::GeodesicMap(const ManifoldSpec& spec, Point base)
    : spec_(spec), frame_(orthonormal_frame(spec, base)) {}

GeodesicMap::GeodesicMap(const ManifoldSpec& spec, TangentFrame frame)
    : spec_(spec), frame_(std::move(frame)) {}

Eigen::VectorXd GeodesicMap::forward(const Point& p) const {
  if (p.x == frame_.base.x) {
    return Eigen::VectorXd::Zero(spec_.dim);
  }
  double alpha;
  Eigen::VectorXd beta(spec_.dim);
  if (spec_.kind == ManifoldKind::Hyperbolic) {
    alpha = -model_inner(spec_, p.x, frame_.base.x);  // cosh of model dist
    Eigen::VectorXd flipped = p.x;
    flipped(0) = -flipped(0);
    beta = frame_.basis.transpose() * flipped;
  } else {
    alpha = p.x.dot(frame_.base.x);
    if (alpha <= 1e-9) {
      throw std::domain_error("forward: point outside the open hemisphere "
                              "around the chart base");
    }
    beta = frame_.basis.transpose() * p.x;
  }
  return beta / alpha;
}

Point GeodesicMap::inverse(const Eigen::VectorXd& y) const {
  if (y.size() != spec_.dim) {
    throw std::invalid_argument("inverse: coordinate size mismatch");
  }
  const double n2 = y.squaredNorm();
  if (spec_.kind == ManifoldKind::Hyperbolic) {
    if (n2 >= (1.0 - 1e-12) * (1.0 - 1e-12)) {
      throw std::domain_error("inverse: coordinates at the unit ball "
                              "boundary");
    }
    if (n2 == 0.0) return frame_.base;
    Eigen::VectorXd out = frame_.base.x + frame_.basis * y;
    return Point{out / std::sqrt(1.0 - n2)};
  }
  if (n2 == 0.0) return frame_.base;
  Eigen::VectorXd out = frame_.base.x + frame_.basis * y;
  return Point{out / std::sqrt(1.0 + n2)};
}

Eigen::MatrixXd GeodesicMap::inverse_jacobian(const Eigen::VectorXd& y) const {
  const double n2 = y.squaredNorm();
  const double sign = spec_.kind == ManifoldKind::Hyperbolic ? -1.0 : 1.0;
  const double s = 1.0 / std::sqrt(1.0 + sign * n2);
  // d/dy_i [ s(y) * (base + B y) ] = s * B_i - sign * s^3 y_i (base + B y)
  const Eigen::VectorXd radial =
      (sign * s * s * s) * (frame_.base.x + frame_.basis * y);
  Eigen::MatrixXd jac = s * frame_.basis;
  jac.noalias() -= radial * y.transpose();
  return jac;
}

std::optional<EuclideanCut> GeodesicMap::try_pullback_subgradient(
    const Eigen::VectorXd& y, const TangentVector& g, CutKind kind) const {
  const Eigen::MatrixXd jac = inverse_jacobian(y);
  Eigen::VectorXd flipped = g.v;
  if (spec_.kind == ManifoldKind::Hyperbolic) {
    flipped(0) = -flipped(0);
  }
  Eigen::VectorXd normal = jac.transpose() * flipped;
  const double nrm = normal.norm();
  if (nrm < 1e-14) {
    return std::nullopt;
  }
  return EuclideanCut{y, normal / nrm, kind};
}

EuclideanCut GeodesicMap::pullback_subgradient(const Eigen::VectorXd& y,
                                               const TangentVector& g,
                                               CutKind kind) const {
  auto cut = try_pullback_subgradient(y, g, kind);
  if (!cut) {
    throw std::domain_error("pullback_subgradient: degenerate subgradient");
  }
  return *cut;
}

double GeodesicMap::ball_image_radius(double radius) const {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("ball_image_radius: radius must be positive");
  }
  const double model_radius = radius * spec_.sqrt_curvature();
  if (spec_.kind == ManifoldKind::Hyperbolic) {
    return std::tanh(model_radius);
  }
  if (model_radius >= M_PI / 2.0) {
    throw std::domain_error("ball_image_radius: spherical radius must stay "
                            "inside the open hemisphere");
  }
  return std::tan(model_radius);
}

}  // namespace geoellipsoid
