#pragma once

#include "geoellipsoid/solver.hpp"

namespace geoellipsoid {

enum class StepRule {
  /// eta_t = radius / sqrt(zeta(radius, K) * t), the usual O(1/sqrt(t))
  /// schedule with the curvature overhead factored in.
  Diminishing,
  /// eta_t = constant_step.
  Constant,
};

struct BaselineConfig {
  std::int64_t max_queries = 100000;
  StepRule step_rule = StepRule::Diminishing;
  double constant_step = 0.0;  // required positive under StepRule::Constant
  bool record_trace = true;
};

/// Projected Riemannian subgradient descent from x_ref:
///   x_{t+1} = project_ball(exp_{x_t}(-eta_t * g_t / |g_t|))
/// where project_ball moves along the geodesic toward x_ref until the iterate
/// re-enters B(x_ref, radius). Runs exactly max_queries objective queries;
/// stage is 0 in every trace row and `stages` in the result. Sublinear
/// O(1/sqrt(t)) reference method for comparisons.
SolveResult run_baseline(const ProblemInstance& instance,
                         const BaselineConfig& config);

}  // namespace geoellipsoid
