#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "geoellipsoid/ellipsoid.hpp"
#include "support/test_rng.hpp"

using namespace geoellipsoid;
using geotest::Rng;

namespace {

double eigen_logdet(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m,
                                                     Eigen::EigenvaluesOnly);
  return eig.eigenvalues().array().log().sum();
}

// Membership residual of y in E; <= 1 means inside.
double membership(const Ellipsoid& e, const Eigen::VectorXd& y) {
  return (y - e.center).dot(e.shape.ldlt().solve(y - e.center));
}

CutOracle distance_cut_oracle(const Eigen::VectorXd& target) {
  return [target](const Eigen::VectorXd& center) -> std::optional<CenterCut> {
    Eigen::VectorXd g = center - target;
    const double nrm = g.norm();
    if (nrm < 1e-15) g(0) = 1.0;  // arbitrary cut at the exact optimum
    else g /= nrm;
    return CenterCut{g, CutKind::Objective, nrm};
  };
}

}  // namespace

TEST_CASE("central cut of the unit disk has the classical closed form") {
  Ellipsoid disk = Ellipsoid::ball(2, 1.0);
  Ellipsoid next = central_cut_update(disk, Eigen::Vector2d(1.0, 0.0));

  CHECK(std::abs(next.center(0) + 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(next.center(1)) < 1e-12);
  CHECK(std::abs(next.shape(0, 0) - 4.0 / 9.0) < 1e-12);
  CHECK(std::abs(next.shape(1, 1) - 4.0 / 3.0) < 1e-12);
  CHECK(std::abs(next.shape(0, 1)) < 1e-12);
  CHECK(std::abs(next.shape(1, 0)) < 1e-12);

  const double det_ratio = next.shape.determinant() / disk.shape.determinant();
  CHECK(std::abs(det_ratio - 16.0 / 27.0) < 1e-12);
  CHECK(std::abs(central_cut_logdet_delta(2) - std::log(16.0 / 27.0)) < 1e-15);

  // Scale invariance in the normal.
  Ellipsoid scaled = central_cut_update(disk, Eigen::Vector2d(7.5, 0.0));
  CHECK((scaled.center - next.center).norm() < 1e-12);
  CHECK((scaled.shape - next.shape).norm() < 1e-12);
}

TEST_CASE("determinant ratio is exact on every step") {
  for (int d : {2, 5}) {
    Rng rng(200 + d);
    Ellipsoid e = Ellipsoid::ball(d, 1.0);
    const double expected = central_cut_logdet_delta(d);
    for (int step = 0; step < 1000; ++step) {
      const double before = eigen_logdet(e.shape);
      e = central_cut_update(e, rng.unit_vector(d));
      const double after = eigen_logdet(e.shape);
      CHECK(std::abs((after - before) - expected) < 1e-12);
    }
    // Tracked logdet never drifts from the factorized value.
    CHECK(std::abs(e.logdet - eigen_logdet(e.shape)) < 1e-9);
    // Symmetry is pinned by the explicit symmetrization.
    CHECK((e.shape - e.shape.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("update is equivariant under rotations") {
  Rng rng(210);
  const int d = 4;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd raw(d, d);
    for (int i = 0; i < d; ++i) raw.col(i) = rng.gaussian_vector(d);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    Eigen::MatrixXd q = qr.householderQ();

    Ellipsoid e;
    e.center = rng.gaussian_vector(d);
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i) a.col(i) = rng.gaussian_vector(d);
    e.shape = a * a.transpose() + Eigen::MatrixXd::Identity(d, d);
    e.logdet = eigen_logdet(e.shape);
    Eigen::VectorXd normal = rng.unit_vector(d);

    Ellipsoid plain = central_cut_update(e, normal);
    Ellipsoid rotated;
    rotated.center = q * e.center;
    rotated.shape = q * e.shape * q.transpose();
    rotated.logdet = e.logdet;
    Ellipsoid back = central_cut_update(rotated, q * normal);

    CHECK((back.center - q * plain.center).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((back.shape - q * plain.shape * q.transpose()).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("degenerate cut directions are rejected") {
  Ellipsoid e = Ellipsoid::ball(3, 1.0);
  CHECK_THROWS_AS(central_cut_update(e, Eigen::Vector3d::Zero()),
                  std::runtime_error);
  CHECK_THROWS_AS(central_cut_update(e, Eigen::Vector2d(1.0, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(central_cut_update(Ellipsoid::ball(1, 1.0),
                                     Eigen::VectorXd::Ones(1)),
                  std::invalid_argument);
}

TEST_CASE("minimizer stays inside every iterate") {
  for (int d : {2, 3, 5}) {
    Rng rng(220 + d);
    Eigen::VectorXd target = rng.in_ball(d, 0.6);
    Ellipsoid e = Ellipsoid::ball(d, 1.0);
    for (int step = 0; step < 300; ++step) {
      Eigen::VectorXd g = e.center - target;
      if (g.norm() < 1e-13) break;
      e = central_cut_update(e, g);
      CHECK(membership(e, target) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("engine reaches a known minimizer quickly") {
  Eigen::VectorXd target(2);
  target << 0.3, -0.2;
  EngineOptions options;
  options.max_iters = 200;
  EngineResult result =
      run_cutting_plane(Ellipsoid::ball(2, 1.0), distance_cut_oracle(target),
                        options);
  REQUIRE(result.best_value.has_value());
  CHECK(*result.best_value <= 1e-6);
  CHECK(result.iters_used == 200);
  CHECK((*result.best_point - target).norm() <= 1e-6);
}

TEST_CASE("engine gap obeys the volume envelope") {
  // gap(N) <= Lip * R * exp(-N / (2d(d+1))) * safety, safety = 10.
  for (int d : {2, 3, 5}) {
    Rng rng(230 + d);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd target = rng.in_ball(d, 0.7);
      EngineOptions options;
      options.max_iters = 6 * d * (d + 1);
      EngineResult result = run_cutting_plane(
          Ellipsoid::ball(d, 1.0), distance_cut_oracle(target), options);
      double best = std::numeric_limits<double>::infinity();
      for (const EngineTraceRow& row : result.trace) {
        if (row.feasible) best = std::min(best, row.value);
        const double envelope =
            std::exp(-static_cast<double>(row.iter) /
                     (2.0 * d * (d + 1.0))) * 10.0;
        CHECK(best <= envelope);
      }
    }
  }
}

TEST_CASE("oracle termination stops the loop immediately") {
  int calls = 0;
  CutOracle oracle = [&calls](const Eigen::VectorXd&) {
    ++calls;
    return std::optional<CenterCut>();
  };
  EngineOptions options;
  options.max_iters = 50;
  EngineResult result =
      run_cutting_plane(Ellipsoid::ball(3, 1.0), oracle, options);
  CHECK(calls == 1);
  CHECK(result.iters_used == 0);  // no cut was applied
  CHECK(result.terminated_by_oracle);
  CHECK_FALSE(result.best_value.has_value());
}

TEST_CASE("best tracking keeps the earliest tie and only feasible rows") {
  std::vector<double> values = {5.0, 3.0, 3.0, 4.0};
  int call = 0;
  CutOracle oracle = [&](const Eigen::VectorXd&) -> std::optional<CenterCut> {
    CenterCut cut{Eigen::Vector2d(1.0, 0.0), CutKind::Objective, {}};
    if (call == 3) {
      cut.kind = CutKind::Feasibility;  // infeasible query: no value
    } else {
      cut.value = values[static_cast<std::size_t>(call)];
    }
    ++call;
    cut.normal = Eigen::Vector2d(call % 2 == 0 ? 1.0 : -0.3, 0.7);
    return cut;
  };
  EngineOptions options;
  options.max_iters = 4;
  EngineResult result =
      run_cutting_plane(Ellipsoid::ball(2, 1.0), oracle, options);
  REQUIRE(result.best_value.has_value());
  CHECK(*result.best_value == 3.0);
  CHECK(result.best_iter == 2);
  REQUIRE(result.trace.size() == 4);
  CHECK(result.trace[3].kind == CutKind::Feasibility);
  CHECK_FALSE(result.trace[3].feasible);
}

TEST_CASE("repeated identical cuts trip the conditioning guard") {
  CutOracle oracle = [](const Eigen::VectorXd&) {
    return CenterCut{Eigen::Vector2d(1.0, 0.0), CutKind::Objective, 1.0};
  };
  EngineOptions options;
  options.max_iters = 500;
  CHECK_THROWS_AS(
      run_cutting_plane(Ellipsoid::ball(2, 1.0), oracle, options),
      ConditioningError);
}

TEST_CASE("periodic factorization only, never in the hot loop") {
  Rng rng(240);
  Eigen::VectorXd target = rng.in_ball(5, 0.5);
  EngineOptions options;
  options.max_iters = 100;
  EngineResult result = run_cutting_plane(
      Ellipsoid::ball(5, 1.0), distance_cut_oracle(target), options);
  // check_interval defaults to d = 5.
  CHECK(result.factorization_count == 20);

  options.check_interval = 7;
  result = run_cutting_plane(Ellipsoid::ball(5, 1.0),
                             distance_cut_oracle(target), options);
  CHECK(result.factorization_count == 14);
  // Tracked logdet resynchronized against the factorization.
  CHECK(std::abs(result.final_ellipsoid.logdet -
                 eigen_logdet(result.final_ellipsoid.shape)) < 1e-9);
}

TEST_CASE("logdet floor stops the loop as a success") {
  Rng rng(250);
  Eigen::VectorXd target = rng.in_ball(3, 0.5);
  EngineOptions options;
  options.max_iters = 100000;
  options.logdet_floor = -20.0;
  EngineResult result = run_cutting_plane(
      Ellipsoid::ball(3, 1.0), distance_cut_oracle(target), options);
  CHECK(result.iters_used < 1000);
  CHECK(result.final_ellipsoid.logdet <= -20.0);
  CHECK_FALSE(result.terminated_by_oracle);
  CHECK(result.best_value.has_value());
}

TEST_CASE("recorded centers line up with the trace") {
  Rng rng(260);
  Eigen::VectorXd target = rng.in_ball(2, 0.5);
  EngineOptions options;
  options.max_iters = 25;
  options.record_centers = true;
  EngineResult result = run_cutting_plane(
      Ellipsoid::ball(2, 1.0), distance_cut_oracle(target), options);
  REQUIRE(result.centers.size() == 25);
  REQUIRE(result.trace.size() == 25);
  CHECK((result.centers[0] - Eigen::Vector2d::Zero()).norm() == 0.0);
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    CHECK(result.trace[i].iter == static_cast<std::int64_t>(i) + 1);
    CHECK(std::abs(result.trace[i].value -
                   (result.centers[i] - target).norm()) < 1e-12);
  }
}
