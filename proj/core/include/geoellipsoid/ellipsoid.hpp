#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geoellipsoid/cut.hpp"

namespace geoellipsoid {

/// Thrown when the shape matrix becomes numerically indefinite or its
/// eigenvalue ratio drops below the configured floor.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ellipsoid { x : (x - center)^T shape^{-1} (x - center) <= 1 } with the
/// log-determinant of `shape` tracked incrementally.
struct Ellipsoid {
  Eigen::VectorXd center;
  Eigen::MatrixXd shape;  // symmetric positive definite
  double logdet = 0.0;

  static Ellipsoid ball(int dim, double radius);
  int dim() const { return static_cast<int>(center.size()); }
};

/// Exact log of the determinant ratio det(shape+)/det(shape) of one central
/// cut in dimension d: d*log(d^2/(d^2-1)) + log((d-1)/(d+1)).
double central_cut_logdet_delta(int d);

/// Minimum-volume ellipsoid containing { x in E : <normal, x - center> <= 0 }.
/// O(d^2); throws std::runtime_error on a degenerate cut direction
/// (normal^T shape normal ~ 0). `normal` need not be normalized.
Ellipsoid central_cut_update(const Ellipsoid& e, const Eigen::VectorXd& normal);

/// Cut through the current center returned by an oracle. `value` is set when
/// the queried center was feasible and the objective was evaluated there.
struct CenterCut {
  Eigen::VectorXd normal;
  CutKind kind;
  std::optional<double> value;
};

/// Oracle called at each ellipsoid center. Returning nullopt terminates the
/// loop early.
using CutOracle =
    std::function<std::optional<CenterCut>(const Eigen::VectorXd& center)>;

struct EngineTraceRow {
  std::int64_t iter = 0;  // 1-based
  CutKind kind = CutKind::Objective;
  bool feasible = false;
  double value = 0.0;  // objective value; meaningful only when feasible
};

struct EngineOptions {
  std::int64_t max_iters = 0;
  bool record_trace = true;
  bool record_centers = false;  // store queried centers next to the trace
  int check_interval = 0;       // 0 selects the dimension d
  double min_eig_ratio = 1e-14;
  /// Stop (successfully) once logdet falls to or below this value. The
  /// caller picks the floor so that an ellipsoid this small can no longer
  /// contain the target sublevel set, at which point some earlier query
  /// must already have hit the target. -inf disables the stop.
  double logdet_floor = -std::numeric_limits<double>::infinity();
};

struct EngineResult {
  std::optional<Eigen::VectorXd> best_point;
  std::optional<double> best_value;
  std::int64_t best_iter = -1;
  std::int64_t iters_used = 0;
  bool terminated_by_oracle = false;
  std::vector<EngineTraceRow> trace;
  std::vector<Eigen::VectorXd> centers;
  std::int64_t factorization_count = 0;  // periodic safety checks only
  Ellipsoid final_ellipsoid;
};

/// Central-cut loop: query the oracle at the center, record the best feasible
/// value (ties keep the earliest iteration), apply the cut. Every
/// check_interval iterations the shape matrix is re-factorized once to
/// resynchronize the tracked logdet and to abort (ConditioningError) when
/// lambda_min/lambda_max < min_eig_ratio; the per-iteration path performs no
/// factorization.
EngineResult run_cutting_plane(Ellipsoid e0, const CutOracle& oracle,
                               const EngineOptions& options);

}  // namespace geoellipsoid
