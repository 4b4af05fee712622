#include "geoellipsoid/ellipsoid.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace geoellipsoid {

Ellipsoid Ellipsoid::ball(int dim, double radius) {
  if (dim < 1 || !(radius > 0.0)) {
    throw std::invalid_argument("Ellipsoid::ball: need dim >= 1, radius > 0");
  }
  Ellipsoid e;
  e.center = Eigen::VectorXd::Zero(dim);
  e.shape = (radius * radius) * Eigen::MatrixXd::Identity(dim, dim);
  e.logdet = 2.0 * dim * std::log(radius);
  return e;
}

double central_cut_logdet_delta(int d) {
  const double dd = static_cast<double>(d);
  return dd * std::log(dd * dd / (dd * dd - 1.0)) +
         std::log((dd - 1.0) / (dd + 1.0));
}

namespace {

// Shared by the value-returning update and the in-place engine loop.
// Overwrites (center, shape, logdet); `pa` is scratch of size d.
void apply_central_cut(Eigen::VectorXd& center, Eigen::MatrixXd& shape,
                       double& logdet, const Eigen::VectorXd& normal,
                       Eigen::VectorXd& pa) {
  const int d = static_cast<int>(center.size());
  if (d < 2) {
    throw std::invalid_argument("central_cut_update: dimension must be >= 2");
  }
  pa.noalias() = shape * normal;
  const double h = normal.dot(pa);
  if (!(h > 1e-300)) {
    throw std::runtime_error("central_cut_update: degenerate cut direction");
  }
  const double dd = static_cast<double>(d);
  const double kappa = dd * dd / (dd * dd - 1.0);
  center.noalias() -= pa / ((dd + 1.0) * std::sqrt(h));
  // shape+ = kappa * (shape - 2/(d+1) * (pa pa^T)/h), evaluated in one pass
  // as kappa*shape - w w^T with w = sqrt(kappa * 2/((d+1)h)) * pa. Writing
  // the rank-1 term as an outer product of a single vector keeps the result
  // exactly symmetric in floating point, so no symmetrization pass is
  // needed.
  const Eigen::VectorXd w = std::sqrt(kappa * 2.0 / ((dd + 1.0) * h)) * pa;
  for (int j = 0; j < d; ++j) {
    shape.col(j) = kappa * shape.col(j) - w(j) * w;
  }
  logdet += central_cut_logdet_delta(d);
}

}  // namespace

Ellipsoid central_cut_update(const Ellipsoid& e,
                             const Eigen::VectorXd& normal) {
  if (normal.size() != e.center.size()) {
    throw std::invalid_argument("central_cut_update: normal size mismatch");
  }
  Ellipsoid out = e;
  Eigen::VectorXd pa(e.dim());
  apply_central_cut(out.center, out.shape, out.logdet, normal, pa);
  return out;
}

EngineResult run_cutting_plane(Ellipsoid e0, const CutOracle& oracle,
                               const EngineOptions& options) {
  const int d = e0.dim();
  if (options.max_iters < 0) {
    throw std::invalid_argument("run_cutting_plane: negative iteration budget");
  }
  const int interval =
      options.check_interval > 0 ? options.check_interval : d;

  EngineResult result;
  Eigen::VectorXd pa(d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;

  for (std::int64_t iter = 1; iter <= options.max_iters; ++iter) {
    const auto cut = oracle(e0.center);
    if (!cut.has_value()) {
      result.terminated_by_oracle = true;
      break;
    }
    result.iters_used = iter;
    if (cut->value.has_value() &&
        (!result.best_value.has_value() || *cut->value < *result.best_value)) {
      result.best_value = *cut->value;
      result.best_point = e0.center;
      result.best_iter = iter;
    }
    if (options.record_trace) {
      result.trace.push_back(EngineTraceRow{iter, cut->kind,
                                            cut->value.has_value(),
                                            cut->value.value_or(0.0)});
    }
    if (options.record_centers) {
      result.centers.push_back(e0.center);
    }
    apply_central_cut(e0.center, e0.shape, e0.logdet, cut->normal, pa);

    if (iter % interval == 0) {
      // Periodic safety check, deliberately outside the per-cut path: one
      // factorization per `interval` iterations keeps the amortized cost at
      // O(d^2) per iteration.
      eig.compute(e0.shape, Eigen::EigenvaluesOnly);
      ++result.factorization_count;
      const auto& ev = eig.eigenvalues();
      const double lo = ev(0), hi = ev(d - 1);
      if (!(lo > 0.0) || lo / hi < options.min_eig_ratio) {
        throw ConditioningError(
            "run_cutting_plane: shape matrix eigenvalue ratio below floor");
      }
      e0.logdet = ev.array().log().sum();
    }
    if (e0.logdet <= options.logdet_floor) break;
  }
  result.final_ellipsoid = std::move(e0);
  return result;
}

}  // namespace geoellipsoid
