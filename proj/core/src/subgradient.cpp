#include "geoellipsoid/subgradient.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace geoellipsoid {

namespace {

// Metric projection onto B(x_ref, radius): walk back along the geodesic
// toward x_ref. Identity for interior points.
Point project_ball(const ManifoldSpec& spec, const Point& x_ref, double radius,
                   const Point& x) {
  const double d = dist(spec, x_ref, x);
  if (d <= radius) return x;
  TangentVector lg = log_map(spec, x_ref, x);
  lg.v *= radius / d;
  return exp_map(spec, lg);
}

}  // namespace

SolveResult run_baseline(const ProblemInstance& instance,
                         const BaselineConfig& config) {
  if (config.max_queries < 1) {
    throw std::invalid_argument("run_baseline: max_queries must be positive");
  }
  if (config.step_rule == StepRule::Constant && !(config.constant_step > 0.0)) {
    throw std::invalid_argument(
        "run_baseline: constant step rule needs a positive step");
  }

  const ManifoldSpec& spec = instance.spec();
  const double r = instance.radius();
  const double z = zeta(r, spec.curvature);

  SolveResult result;
  result.stages = 0;
  Point x = instance.x_ref();
  bool has_best = false;

  for (std::int64_t t = 1; t <= config.max_queries; ++t) {
    const SubgradientResult eval = evaluate(instance, x);
    if (!has_best || eval.value < result.f_best) {
      has_best = true;
      result.f_best = eval.value;
      result.x_best = x;
    }
    if (config.record_trace) {
      result.trace.rows.push_back(
          TraceRow{t, 0, t, true, eval.value, result.f_best});
    }
    if (t == config.max_queries) break;

    const double grad_norm = metric_norm(spec, eval.subgradient);
    if (grad_norm < 1e-15) continue;  // flat spot; the ball center stays put
    const double eta = config.step_rule == StepRule::Diminishing
                           ? r / std::sqrt(z * static_cast<double>(t))
                           : config.constant_step;
    TangentVector step{x, eval.subgradient.v * (-eta / grad_norm)};
    x = project_ball(spec, instance.x_ref(), r,
                     exp_map(spec, step));
  }

  result.queries_used = config.max_queries;
  result.complete = true;
  return result;
}

}  // namespace geoellipsoid
