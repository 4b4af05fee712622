#include "geoellipsoid/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "geoellipsoid/ellipsoid.hpp"
#include "geoellipsoid/geodesic_map.hpp"

namespace geoellipsoid {

namespace {

void validate_config(const SolverConfig& config) {
  if (!(config.epsilon > 0.0) || !(config.epsilon < 1.0)) {
    throw std::invalid_argument("solve: epsilon must lie in (0, 1)");
  }
  if (!(config.subproblem_safety >= 1.0)) {
    throw std::invalid_argument("solve: subproblem_safety must be >= 1");
  }
  if (config.max_total_queries < 1) {
    throw std::invalid_argument("solve: query budget must be positive");
  }
}

struct BestTracker {
  bool has = false;
  double value = 0.0;
  Point point;

  void offer(double v, const Point& p) {
    if (!has || v < value) {
      has = true;
      value = v;
      point = p;
    }
  }
};

struct StageOutcome {
  BestTracker stage_best;
  std::int64_t queries = 0;
  bool budget_hit = false;
  bool stationary = false;  // a query's subgradient fell below float noise
  bool conditioning_stop = false;  // engine aborted on eigenvalue ratio
};

// One chart-local central-cut run over B(center, ball_radius) intersected
// with the feasible ball. Composite oracle order per query:
//   1. centers outside the chart image of B(center, ball_radius) get the
//      exact Euclidean ball cut,
//   2. feasibility violations get the pulled-back separating cut,
//   3. feasible centers are evaluated and cut by the pulled-back subgradient.
StageOutcome run_stage(const ProblemInstance& instance, const Point& center,
                       double ball_radius, double eps_sub,
                       const SolverConfig& config, std::int32_t stage_index,
                       std::int64_t& global_query, BestTracker& global_best,
                       Trace* trace) {
  const ManifoldSpec& spec = instance.spec();
  const int d = spec.dim;
  const double sqrt_k = spec.sqrt_curvature();
  const GeodesicMap map(spec, center);

  const double chart_radius = map.ball_image_radius(ball_radius);
  // Lipschitz constant of the pulled-back objective over the chart ball.
  // The chart metric distortion on { |y| <= tanh(s) } is bounded by
  // cosh(s)^2 (hyperbolic); the spherical chart inverse is metric
  // contracting, 1 + tan(s)^2 keeps the same conservative form.
  const double model_radius = ball_radius * sqrt_k;
  const double model_lipschitz = instance.lipschitz() / sqrt_k;
  const double distortion =
      spec.kind == ManifoldKind::Hyperbolic
          ? std::cosh(model_radius) * std::cosh(model_radius)
          : 1.0 + std::tan(model_radius) * std::tan(model_radius);
  const double chart_lipschitz = model_lipschitz * distortion;

  const double budget_log =
      std::log(chart_lipschitz * chart_radius / eps_sub + std::exp(1.0));
  const auto iters = static_cast<std::int64_t>(
      std::ceil(config.subproblem_safety * 2.0 * d * (d + 1) * budget_log));

  StageOutcome outcome;
  std::int64_t inner = 0;

  CutOracle oracle = [&](const Eigen::VectorXd& y) -> std::optional<CenterCut> {
    if (global_query >= config.max_total_queries) {
      outcome.budget_hit = true;
      return std::nullopt;
    }
    ++global_query;
    ++inner;
    ++outcome.queries;

    CenterCut cut;
    const double norm = y.norm();
    if (norm > chart_radius) {
      cut.normal = y / norm;
      cut.kind = CutKind::Feasibility;
    } else {
      const Point p = map.inverse(y);
      const ConstraintResult feas = constraint_oracle(instance, p);
      if (!feas.inside) {
        cut = CenterCut{
            map.pullback_subgradient(y, *feas.separator, CutKind::Feasibility)
                .normal,
            CutKind::Feasibility, std::nullopt};
      } else {
        const SubgradientResult eval = evaluate(instance, p);
        outcome.stage_best.offer(eval.value, p);
        global_best.offer(eval.value, p);
        const auto pulled =
            map.try_pullback_subgradient(y, eval.subgradient,
                                         CutKind::Objective);
        if (!pulled) {
          // Subgradient below float noise: f(p) - f* <= |g| * 2r already
          // beats any reachable tolerance, so stop the stage at p.
          outcome.stationary = true;
          if (trace != nullptr) {
            trace->rows.push_back(TraceRow{global_query, stage_index, inner,
                                           true, eval.value,
                                           global_best.value});
          }
          return std::nullopt;
        }
        cut = CenterCut{pulled->normal, CutKind::Objective, eval.value};
      }
    }
    if (trace != nullptr) {
      trace->rows.push_back(TraceRow{
          global_query, stage_index, inner, cut.value.has_value(),
          cut.value.has_value() ? *cut.value
                                : std::numeric_limits<double>::quiet_NaN(),
          global_best.value});
    }
    return cut;
  };

  EngineOptions options;
  options.max_iters = iters;
  options.record_trace = false;
  // Volume floor implementing the classical stopping argument: the
  // eps_sub-sublevel set contains a shrunk copy of a metric half-radius
  // ball inside the stage-feasible intersection, whose chart image keeps a
  // ball of radius >= eps_sub / (16 * chart_lipschitz). An ellipsoid with
  // logdet at or below that ball's can no longer contain the sublevel set,
  // so some recorded query already meets the eps_sub gap and the stage can
  // stop. This also keeps the collapse well clear of the engine's
  // eigenvalue-ratio guard on stages whose optimum sits on the stage-ball
  // boundary, where the ellipsoid flattens.
  const double localization_radius =
      std::max(eps_sub / (16.0 * chart_lipschitz), 1e-150);
  options.logdet_floor = 2.0 * d * std::log(localization_radius);
  try {
    run_cutting_plane(Ellipsoid::ball(d, chart_radius), oracle, options);
  } catch (const ConditioningError&) {
    // Near-one-dimensional cut sequences (for instance a far-off target,
    // where every subgradient points down the same axis) halve one axis per
    // step while the un-cut axes inflate, so the eigenvalue-ratio guard
    // trips on a numerically healthy run. The stage keeps its best query;
    // recentering there with a fresh round ellipsoid restores conditioning
    // while retaining the stage's axial progress.
    outcome.conditioning_stop = true;
  }
  return outcome;
}

}  // namespace

double zeta(double radius, double curvature) {
  if (!(radius > 0.0) || !(curvature > 0.0)) {
    throw std::invalid_argument("zeta: radius and curvature must be positive");
  }
  const double s = radius * std::sqrt(curvature);
  if (s < 1e-8) return 1.0;
  return s / std::tanh(s);
}

SubproblemResult solve_subproblem(const ProblemInstance& instance,
                                  const Point& center, double ball_radius,
                                  double eps_sub, const SolverConfig& config) {
  validate_config(config);
  if (!(eps_sub > 0.0)) {
    throw std::invalid_argument("solve_subproblem: eps_sub must be positive");
  }
  std::int64_t global_query = 0;
  BestTracker global_best;
  StageOutcome outcome = run_stage(instance, center, ball_radius, eps_sub,
                                   config, 1, global_query, global_best,
                                   nullptr);
  if (outcome.conditioning_stop) {
    throw ConditioningError("solve_subproblem: shape matrix eigenvalue "
                            "ratio below floor");
  }
  if (!outcome.stage_best.has) {
    throw std::runtime_error("solve_subproblem: no feasible query (budget "
                             "exhausted immediately)");
  }
  return SubproblemResult{outcome.stage_best.point, outcome.stage_best.value,
                          outcome.queries};
}

SolveResult solve(const ProblemInstance& instance, const SolverConfig& config) {
  validate_config(config);
  const double r = instance.radius();
  const double m = instance.lipschitz();
  const double cap_radius = 1.0 / instance.spec().sqrt_curvature();

  SolveResult result;
  Trace* trace = config.record_trace ? &result.trace : nullptr;
  std::int64_t global_query = 0;
  BestTracker best;

  if (r <= cap_radius) {
    // One chart covers the whole feasible ball.
    StageOutcome outcome =
        run_stage(instance, instance.x_ref(), r, config.epsilon * m * r,
                  config, 1, global_query, best, trace);
    result.stages = 1;
    result.complete = !outcome.budget_hit;
  } else {
    const double eps_sub = (config.epsilon / 4.0) * m * cap_radius;
    const auto stage_count = static_cast<std::int32_t>(std::ceil(
        2.0 * (r / cap_radius) * std::log(2.0 / config.epsilon)));
    Point x = instance.x_ref();
    result.complete = true;
    for (std::int32_t k = 1; k <= stage_count; ++k) {
      StageOutcome outcome = run_stage(instance, x, cap_radius, eps_sub,
                                       config, k, global_query, best, trace);
      if (outcome.queries > 0) result.stages = k;
      if (outcome.stage_best.has) x = outcome.stage_best.point;
      if (outcome.budget_hit) {
        result.complete = false;
        break;
      }
      if (outcome.stationary) break;  // already optimal to float precision
    }
  }

  if (!best.has) {
    throw std::runtime_error("solve: query budget too small for a single "
                             "query");
  }
  result.x_best = best.point;
  result.f_best = best.value;
  result.queries_used = global_query;
  return result;
}

}  // namespace geoellipsoid
