#include <doctest.h>

#include <Eigen/Core>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

#include "geoellipsoid/geodesic_map.hpp"
#include "support/test_rng.hpp"

using namespace geoellipsoid;
using geotest::Rng;

namespace {

// Chart radius used for sampling: keeps hyperbolic points away from the
// ball boundary and spherical points inside the hemisphere.
double sample_radius(const ManifoldSpec& spec) {
  return spec.kind == ManifoldKind::Hyperbolic ? 2.0 / spec.sqrt_curvature()
                                               : 1.2 / spec.sqrt_curvature();
}

// Root-mean-square residual of the best-fit line through the rows of `ys`.
double line_fit_residual(const Eigen::MatrixXd& ys) {
  Eigen::MatrixXd centered = ys.rowwise() - ys.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  const Eigen::VectorXd& s = svd.singularValues();
  double off = 0.0;
  for (int i = 1; i < s.size(); ++i) off += s(i) * s(i);
  return std::sqrt(off / static_cast<double>(ys.rows()));
}

}  // namespace

TEST_CASE("forward and inverse fix the base point exactly") {
  for (ManifoldKind kind : {ManifoldKind::Hyperbolic, ManifoldKind::Spherical}) {
    Rng rng(kind == ManifoldKind::Hyperbolic ? 101 : 102);
    ManifoldSpec spec(kind, 3, 1.7);
    Point base = geotest::random_point_in_ball(
        spec, geotest::model_origin(spec), 1.0, rng);
    GeodesicMap map(spec, base);
    CHECK(map.forward(base).norm() == 0.0);
    CHECK((map.inverse(Eigen::Vector3d::Zero()).x - base.x).norm() == 0.0);
  }
}

TEST_CASE("forward/inverse roundtrip") {
  for (ManifoldKind kind : {ManifoldKind::Hyperbolic, ManifoldKind::Spherical}) {
    Rng rng(kind == ManifoldKind::Hyperbolic ? 111 : 112);
    for (double curvature : {1.0, 0.4}) {
      ManifoldSpec spec(kind, 4, curvature);
      Point base = geotest::random_point_in_ball(
          spec, geotest::model_origin(spec), 0.7, rng);
      GeodesicMap map(spec, base);
      for (int i = 0; i < 200; ++i) {
        Point p = geotest::random_point_in_ball(spec, base,
                                                sample_radius(spec), rng);
        Eigen::VectorXd y = map.forward(p);
        CHECK((map.inverse(y).x - p.x).norm() < 1e-10);
        Eigen::VectorXd y2 = rng.in_ball(4, map.ball_image_radius(
                                                sample_radius(spec)));
        CHECK((map.forward(map.inverse(y2)) - y2).norm() < 1e-10);
      }
    }
  }
}

TEST_CASE("geodesics map to straight lines") {
  for (ManifoldKind kind : {ManifoldKind::Hyperbolic, ManifoldKind::Spherical}) {
    for (int dim : {2, 5}) {
      Rng rng((kind == ManifoldKind::Hyperbolic ? 1210 : 1220) + dim);
      ManifoldSpec spec(kind, dim, 1.0);
      Point base = geotest::random_point_in_ball(
          spec, geotest::model_origin(spec), 0.5, rng);
      GeodesicMap map(spec, base);
      for (int trial = 0; trial < 100; ++trial) {
        Point a = geotest::random_point_in_ball(spec, base, 1.2, rng);
        Point b = geotest::random_point_in_ball(spec, base, 1.2, rng);
        TangentVector chord = log_map(spec, a, b);
        Eigen::MatrixXd ys(10, dim);
        for (int k = 0; k < 10; ++k) {
          TangentVector step{a, chord.v * (static_cast<double>(k) / 9.0)};
          ys.row(k) = map.forward(exp_map(spec, step)).transpose();
        }
        CHECK(line_fit_residual(ys) < 1e-9);
      }
    }
  }
}

TEST_CASE("inverse jacobian matches finite differences") {
  for (ManifoldKind kind : {ManifoldKind::Hyperbolic, ManifoldKind::Spherical}) {
    Rng rng(kind == ManifoldKind::Hyperbolic ? 131 : 132);
    for (int dim : {2, 4}) {
      ManifoldSpec spec(kind, dim, 1.0);
      Point base = geotest::random_point_in_ball(
          spec, geotest::model_origin(spec), 0.6, rng);
      GeodesicMap map(spec, base);
      const double chart = map.ball_image_radius(sample_radius(spec));
      const double h = 1e-6;
      for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd y = rng.in_ball(dim, chart);
        Eigen::MatrixXd jac = map.inverse_jacobian(y);
        REQUIRE(jac.rows() == dim + 1);
        REQUIRE(jac.cols() == dim);
        for (int j = 0; j < dim; ++j) {
          Eigen::VectorXd yp = y, ym = y;
          yp(j) += h;
          ym(j) -= h;
          Eigen::VectorXd fd = (map.inverse(yp).x - map.inverse(ym).x) / (2 * h);
          CHECK((jac.col(j) - fd).cwiseAbs().maxCoeff() < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("pulled-back cuts preserve halfspace sides") {
  for (ManifoldKind kind : {ManifoldKind::Hyperbolic, ManifoldKind::Spherical}) {
    Rng rng(kind == ManifoldKind::Hyperbolic ? 141 : 142);
    ManifoldSpec spec(kind, 3, 1.0);
    Point base = geotest::model_origin(spec);
    GeodesicMap map(spec, base);
    int checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
      Eigen::VectorXd y = rng.in_ball(3, map.ball_image_radius(1.0));
      Point p = map.inverse(y);
      TangentVector g = geotest::random_tangent(spec, p, 1.0, rng);
      EuclideanCut cut = map.pullback_subgradient(y, g, CutKind::Objective);
      CHECK(std::abs(cut.normal.norm() - 1.0) < 1e-12);
      CHECK((cut.anchor - y).norm() == 0.0);

      Point x = geotest::random_point_in_ball(spec, base, 1.4, rng);
      const double chart_side = cut.normal.dot(map.forward(x) - y);
      const double manifold_side = metric_inner(spec, g, log_map(spec, p, x));
      if (std::abs(chart_side) > 1e-8 && std::abs(manifold_side) > 1e-8) {
        ++checked;
        CHECK(chart_side * manifold_side > 0.0);
      }
    }
    CHECK(checked > 1500);  // the margin filter must not eat the sample
  }
}

TEST_CASE("metric balls map onto Euclidean balls of the stated radius") {
  for (ManifoldKind kind : {ManifoldKind::Hyperbolic, ManifoldKind::Spherical}) {
    Rng rng(kind == ManifoldKind::Hyperbolic ? 151 : 152);
    for (double curvature : {1.0, 2.5}) {
      ManifoldSpec spec(kind, 3, curvature);
      Point base = geotest::random_point_in_ball(
          spec, geotest::model_origin(spec), 0.5, rng);
      GeodesicMap map(spec, base);
      const double radius = 0.8 / spec.sqrt_curvature();
      const double image = map.ball_image_radius(radius);
      const double expected =
          kind == ManifoldKind::Hyperbolic
              ? std::tanh(radius * spec.sqrt_curvature())
              : std::tan(radius * spec.sqrt_curvature());
      CHECK(std::abs(image - expected) < 1e-14);
      for (int i = 0; i < 200; ++i) {
        TangentVector v = geotest::random_tangent(spec, base, radius, rng);
        CHECK(std::abs(map.forward(exp_map(spec, v)).norm() - image) < 1e-9);
        TangentVector inner{base, v.v * rng.range(0.0, 0.999)};
        CHECK(map.forward(exp_map(spec, inner)).norm() < image);
      }
    }
  }
}

TEST_CASE("images of geodesic balls are convex") {
  for (ManifoldKind kind : {ManifoldKind::Hyperbolic, ManifoldKind::Spherical}) {
    Rng rng(kind == ManifoldKind::Hyperbolic ? 161 : 162);
    ManifoldSpec spec(kind, 3, 1.0);
    Point base = geotest::model_origin(spec);
    GeodesicMap map(spec, base);
    const double radius = 1.0;
    for (int i = 0; i < 500; ++i) {
      Point a = geotest::random_point_in_ball(spec, base, radius, rng);
      Point b = geotest::random_point_in_ball(spec, base, radius, rng);
      // Random chord point between the two images.
      const double t = rng.uniform();
      Eigen::VectorXd mid = (1.0 - t) * map.forward(a) + t * map.forward(b);
      CHECK(dist(spec, map.inverse(mid), base) <= radius + 1e-9);
    }
  }
}

TEST_CASE("pulled-back distance objectives obey the distortion bound") {
  ManifoldSpec spec(ManifoldKind::Hyperbolic, 3, 1.0);
  Point base = geotest::model_origin(spec);
  GeodesicMap map(spec, base);
  Rng rng(171);
  Point target = geotest::random_point_in_ball(spec, base, 1.0, rng);
  const double bound = std::cosh(1.0) * std::cosh(1.0) * (1.0 + 1e-6);
  const double chart = std::tanh(1.0);
  for (int i = 0; i < 2000; ++i) {
    Eigen::VectorXd y1 = rng.in_ball(3, chart);
    Eigen::VectorXd y2 = rng.in_ball(3, chart);
    const double f1 = dist(spec, map.inverse(y1), target);
    const double f2 = dist(spec, map.inverse(y2), target);
    const double gap = (y1 - y2).norm();
    if (gap > 1e-12) CHECK(std::abs(f1 - f2) <= bound * gap + 1e-12);
  }
}

TEST_CASE("degenerate subgradients are reported, not amplified") {
  ManifoldSpec spec(ManifoldKind::Hyperbolic, 3, 1.0);
  GeodesicMap map(spec, geotest::model_origin(spec));
  Rng rng(181);
  Eigen::VectorXd y = rng.in_ball(3, 0.5);
  TangentVector zero{map.inverse(y), Eigen::VectorXd::Zero(4)};
  CHECK_FALSE(map.try_pullback_subgradient(y, zero, CutKind::Objective)
                  .has_value());
  CHECK_THROWS_AS(map.pullback_subgradient(y, zero, CutKind::Objective),
                  std::domain_error);
}

TEST_CASE("domain guards") {
  ManifoldSpec sph(ManifoldKind::Spherical, 2, 1.0);
  GeodesicMap gn(sph, geotest::model_origin(sph));
  // Equator point: not in the open hemisphere around the base.
  Point equator = make_point(sph, Eigen::Vector3d(0.0, 1.0, 0.0));
  CHECK_THROWS_AS(gn.forward(equator), std::domain_error);
  CHECK_THROWS_AS(gn.ball_image_radius(1.6), std::domain_error);

  ManifoldSpec hyp(ManifoldKind::Hyperbolic, 2, 1.0);
  GeodesicMap klein(hyp, geotest::model_origin(hyp));
  Eigen::Vector2d boundary(1.0 - 1e-13, 0.0);
  CHECK_THROWS_AS(klein.inverse(boundary), std::domain_error);
}
