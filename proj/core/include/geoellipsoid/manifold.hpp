#pragma once

#include <Eigen/Core>

namespace geoellipsoid {

/// Sign of the sectional curvature of the model space.
enum class ManifoldKind { Hyperbolic, Spherical };

/// A complete simply connected space of constant curvature -K (hyperbolic)
/// or +K (spherical), K > 0, with intrinsic dimension dim >= 2.
///
/// Representation convention: points live in ambient coordinates of the
/// *unit curvature* model, independently of K.
///   hyperbolic: the sheet <x,x>_L = -1, x0 > 0, of the hyperboloid in
///               Minkowski space with <u,v>_L = -u0*v0 + sum_{i>=1} ui*vi
///   spherical:  the unit sphere <x,x> = 1 in Euclidean space
///
/// All lengths exposed by the API (distances, tangent norms, tangent
/// coordinates) are metric lengths at curvature K. A metric length L
/// corresponds to a model length L*sqrt(K), so at K = 1 the two coincide.
struct ManifoldSpec {
  ManifoldKind kind;
  int dim;           // intrinsic dimension d, ambient vectors have d+1 entries
  double curvature;  // K > 0, curvature magnitude

  ManifoldSpec(ManifoldKind kind, int dim, double curvature);

  int ambient_dim() const { return dim + 1; }
  double sqrt_curvature() const;
};

/// Ambient coordinates of a point on the unit model surface.
struct Point {
  Eigen::VectorXd x;
};

/// Tangent vector at `base`, stored as an ambient vector orthogonal to the
/// base point in the model inner product. Its metric norm (length units at
/// curvature K) is sqrt(model_inner(v,v)) / sqrt(K).
struct TangentVector {
  Point base;
  Eigen::VectorXd v;
};

/// Orthonormal basis E_1..E_d of the tangent space at `base`, orthonormal in
/// the model inner product. Column i of `basis` is E_{i+1}.
struct TangentFrame {
  Point base;
  Eigen::MatrixXd basis;  // (d+1) x d
};

/// Ambient bilinear form of the model: Minkowski for hyperbolic, Euclidean
/// dot product for spherical. Curvature independent.
double model_inner(const ManifoldSpec& spec, const Eigen::VectorXd& u,
                   const Eigen::VectorXd& v);

/// Riemannian inner product / norm at curvature K, in metric length units.
double metric_inner(const ManifoldSpec& spec, const TangentVector& u,
                    const TangentVector& v);
double metric_norm(const ManifoldSpec& spec, const TangentVector& v);

/// True when `x` satisfies the model constraint within `tol` (and x0 > 0 on
/// the hyperboloid).
bool is_on_model(const ManifoldSpec& spec, const Eigen::VectorXd& x,
                 double tol = 1e-9);

/// Validates the model constraint within 1e-9 and returns the point.
/// Throws std::invalid_argument otherwise.
Point make_point(const ManifoldSpec& spec, Eigen::VectorXd x);

/// Rescales an ambient vector onto the model surface. Used to control drift
/// after exponential steps; requires the input to be non-degenerate.
Point project_to_model(const ManifoldSpec& spec, Eigen::VectorXd x);

/// Removes the component of `v` along `base` (model inner product), restoring
/// tangency. Applied automatically where drift can accumulate.
void reorthogonalize_tangent(const ManifoldSpec& spec, TangentVector& v);

/// Geodesic distance in metric length units:
///   hyperbolic: arccosh(-<x,y>_L) / sqrt(K)
///   spherical:  arccos(<x,y>) / sqrt(K)
/// Computed through cancellation-free forms; symmetric, zero iff x == y.
/// Throws std::domain_error if the points are off the model beyond the
/// clamping tolerance.
double dist(const ManifoldSpec& spec, const Point& x, const Point& y);

/// Exponential map. Moves metric distance metric_norm(v) from v.base along
/// the geodesic with initial direction v. Exact for v = 0. The result is
/// re-projected onto the model surface.
Point exp_map(const ManifoldSpec& spec, const TangentVector& v);

/// Logarithmic map: the tangent vector at `from` with
///   exp_map(log_map(from, to)) == to  and  metric_norm == dist(from, to).
/// Spherical precondition: dist(from, to) < pi/sqrt(K) - 1e-6 model margin;
/// near-antipodal inputs throw std::domain_error.
TangentVector log_map(const ManifoldSpec& spec, const Point& from,
                      const Point& to);

/// Deterministic tangent frame at `x`: Gram-Schmidt of the ambient standard
/// basis projected to the tangent space, in index order, with respect to the
/// model inner product.
TangentFrame orthonormal_frame(const ManifoldSpec& spec, const Point& x);

/// Point with tangent coordinates `c` (metric length units) in `frame`:
///   exp_map of sum_i c_i * sqrt(K) * E_i.
/// Spherical coordinates with |c| >= pi/sqrt(K) are rejected (outside the
/// injectivity radius).
Point point_from_tangent_coords(const ManifoldSpec& spec,
                                const TangentFrame& frame,
                                const Eigen::VectorXd& c);

/// Inverse of point_from_tangent_coords (same frame), via log_map and frame
/// inner products.
Eigen::VectorXd tangent_coords(const ManifoldSpec& spec,
                               const TangentFrame& frame, const Point& p);

}  // namespace geoellipsoid
