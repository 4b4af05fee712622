#include "geoellipsoid/manifold.hpp"

#include <cmath>
#include <stdexcept>

namespace geoellipsoid {

namespace {

constexpr double kModelTol = 1e-9;

// sinh(t)/t and sin(t)/t with series fallback near zero.
double sinhc(double t) {
  if (std::abs(t) < 1e-6) {
    const double t2 = t * t;
    return 1.0 + t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sinh(t) / t;
}

double sinc(double t) {
  if (std::abs(t) < 1e-6) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

double minkowski(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return u.dot(v) - 2.0 * u(0) * v(0);
}

// Model distance (unit curvature). Hyperbolic uses the chord identity
// <x-y, x-y>_L = 4 sinh^2(theta/2), which is exact and avoids the
// cancellation in arccosh near 1. Spherical splits at the equator so both
// branches stay well conditioned.
double model_dist(const ManifoldSpec& spec, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& y) {
  if (spec.kind == ManifoldKind::Hyperbolic) {
    const Eigen::VectorXd diff = x - y;
    double chord2 = minkowski(diff, diff);
    if (chord2 < 0.0) {
      if (chord2 < -1e-9) {
        throw std::domain_error(
            "dist: points are not on the hyperboloid model");
      }
      chord2 = 0.0;
    }
    return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
  }
  const double c = x.dot(y);
  if (c > 1.0 + 1e-9 || c < -1.0 - 1e-9) {
    throw std::domain_error("dist: points are not on the sphere model");
  }
  if (c >= 0.0) {
    const double half_chord = 0.5 * (x - y).norm();
    return 2.0 * std::asin(std::min(1.0, half_chord));
  }
  const double half_chord = 0.5 * (x + y).norm();
  return M_PI - 2.0 * std::asin(std::min(1.0, half_chord));
}

}  // namespace

ManifoldSpec::ManifoldSpec(ManifoldKind kind_, int dim_, double curvature_)
    : kind(kind_), dim(dim_), curvature(curvature_) {
  if (dim < 2) {
    throw std::invalid_argument("ManifoldSpec: dim must be >= 2");
  }
  if (!(curvature > 0.0) || !std::isfinite(curvature)) {
    throw std::invalid_argument("ManifoldSpec: curvature must be positive");
  }
}

double ManifoldSpec::sqrt_curvature() const { return std::sqrt(curvature); }

double model_inner(const ManifoldSpec& spec, const Eigen::VectorXd& u,
                   const Eigen::VectorXd& v) {
  return spec.kind == ManifoldKind::Hyperbolic ? minkowski(u, v) : u.dot(v);
}

double metric_inner(const ManifoldSpec& spec, const TangentVector& u,
                    const TangentVector& v) {
  return model_inner(spec, u.v, v.v) / spec.curvature;
}

double metric_norm(const ManifoldSpec& spec, const TangentVector& v) {
  // Tangent vectors on the hyperboloid are spacelike; tiny negative values
  // are rounding noise.
  return std::sqrt(std::max(0.0, model_inner(spec, v.v, v.v))) /
         spec.sqrt_curvature();
}

bool is_on_model(const ManifoldSpec& spec, const Eigen::VectorXd& x,
                 double tol) {
  if (x.size() != spec.ambient_dim()) return false;
  const double target = spec.kind == ManifoldKind::Hyperbolic ? -1.0 : 1.0;
  if (std::abs(model_inner(spec, x, x) - target) > tol) return false;
  if (spec.kind == ManifoldKind::Hyperbolic && !(x(0) > 0.0)) return false;
  return true;
}

Point make_point(const ManifoldSpec& spec, Eigen::VectorXd x) {
  if (!is_on_model(spec, x, kModelTol)) {
    throw std::invalid_argument("make_point: coordinates violate the model "
                                "constraint beyond 1e-9");
  }
  return Point{std::move(x)};
}

Point project_to_model(const ManifoldSpec& spec, Eigen::VectorXd x) {
  const double q = model_inner(spec, x, x);
  if (spec.kind == ManifoldKind::Hyperbolic) {
    if (!(q < 0.0)) {
      throw std::domain_error("project_to_model: vector is not timelike");
    }
    x /= std::sqrt(-q);
    if (!(x(0) > 0.0)) {
      throw std::domain_error("project_to_model: wrong hyperboloid sheet");
    }
  } else {
    if (!(q > 0.0)) {
      throw std::domain_error("project_to_model: zero vector");
    }
    x /= std::sqrt(q);
  }
  return Point{std::move(x)};
}

void reorthogonalize_tangent(const ManifoldSpec& spec, TangentVector& v) {
  const double r = model_inner(spec, v.v, v.base.x);
  if (std::abs(r) <= 1e-12) return;
  if (spec.kind == ManifoldKind::Hyperbolic) {
    // <base,base>_L = -1, so the component of v along base is -r * base.
    v.v += r * v.base.x;
  } else {
    v.v -= r * v.base.x;
  }
}

double dist(const ManifoldSpec& spec, const Point& x, const Point& y) {
  return model_dist(spec, x.x, y.x) / spec.sqrt_curvature();
}

Point exp_map(const ManifoldSpec& spec, const TangentVector& v) {
  const double theta =
      std::sqrt(std::max(0.0, model_inner(spec, v.v, v.v)));
  if (theta == 0.0) return v.base;
  Eigen::VectorXd out;
  if (spec.kind == ManifoldKind::Hyperbolic) {
    out = std::cosh(theta) * v.base.x + sinhc(theta) * v.v;
  } else {
    out = std::cos(theta) * v.base.x + sinc(theta) * v.v;
  }
  return project_to_model(spec, std::move(out));
}

TangentVector log_map(const ManifoldSpec& spec, const Point& from,
                      const Point& to) {
  const double theta = model_dist(spec, from.x, to.x);
  TangentVector result{from, Eigen::VectorXd()};
  if (spec.kind == ManifoldKind::Hyperbolic) {
    result.v = (to.x - std::cosh(theta) * from.x) / sinhc(theta);
  } else {
    if (theta > M_PI - 1e-6) {
      throw std::domain_error(
          "log_map: near-antipodal points, direction is ill conditioned");
    }
    result.v = (to.x - std::cos(theta) * from.x) / sinc(theta);
  }
  reorthogonalize_tangent(spec, result);
  return result;
}

TangentFrame orthonormal_frame(const ManifoldSpec& spec, const Point& x) {
  const int d = spec.dim;
  const int n = spec.ambient_dim();
  TangentFrame frame{x, Eigen::MatrixXd(n, d)};
  const double sign = spec.kind == ManifoldKind::Hyperbolic ? 1.0 : -1.0;
  int count = 0;
  for (int i = 0; i < n && count < d; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(i) = 1.0;
    // Project to the tangent space and orthogonalize against the accepted
    // columns, twice over: the second pass clears the rounding the first
    // one leaves behind at large ambient coordinates.
    for (int pass = 0; pass < 2; ++pass) {
      e += sign * model_inner(spec, e, x.x) * x.x;
      for (int j = 0; j < count; ++j) {
        e -= model_inner(spec, e, frame.basis.col(j)) * frame.basis.col(j);
      }
    }
    const double nrm2 = model_inner(spec, e, e);
    if (nrm2 < 1e-12) continue;  // standard vector (nearly) parallel to x
    frame.basis.col(count++) = e / std::sqrt(nrm2);
  }
  if (count != d) {
    throw std::runtime_error("orthonormal_frame: failed to span the tangent "
                             "space");
  }
  return frame;
}

Point point_from_tangent_coords(const ManifoldSpec& spec,
                                const TangentFrame& frame,
                                const Eigen::VectorXd& c) {
  if (c.size() != spec.dim) {
    throw std::invalid_argument("point_from_tangent_coords: coordinate size "
                                "mismatch");
  }
  const double sqrt_k = spec.sqrt_curvature();
  if (spec.kind == ManifoldKind::Spherical &&
      c.norm() * sqrt_k >= M_PI) {
    throw std::domain_error("point_from_tangent_coords: coordinates outside "
                            "the injectivity radius pi/sqrt(K)");
  }
  TangentVector v{frame.base, frame.basis * (sqrt_k * c)};
  return exp_map(spec, v);
}

Eigen::VectorXd tangent_coords(const ManifoldSpec& spec,
                               const TangentFrame& frame, const Point& p) {
  const TangentVector lg = log_map(spec, frame.base, p);
  Eigen::VectorXd flipped = lg.v;
  if (spec.kind == ManifoldKind::Hyperbolic) {
    flipped(0) = -flipped(0);  // apply the Minkowski signature
  }
  return (frame.basis.transpose() * flipped) / spec.sqrt_curvature();
}

}  // namespace geoellipsoid
