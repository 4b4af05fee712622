#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "geoellipsoid/problems.hpp"
#include "geoellipsoid/solver.hpp"
#include "geoellipsoid/subgradient.hpp"

namespace geoellipsoid {

namespace {

double objective_value(const ProblemInstance& instance, const Point& x) {
  return evaluate(instance, x).value;
}

const std::vector<Point>* anchors_of(const Objective& objective) {
  if (const auto* med = std::get_if<GeometricMedian>(&objective)) {
    return &med->anchors;
  }
  if (const auto* mx = std::get_if<MaxDistance>(&objective)) {
    return &mx->anchors;
  }
  return nullptr;
}

// Long projected-subgradient run used as the independent cross-check. Stops
// as soon as its best value certifies agreement; throws when the budget runs
// out first or when it beats the claimed value by more than `tolerance`
// (which would mean the primary estimate is wrong).
ReferenceOptimum crosscheck_with_subgradient(const ProblemInstance& instance,
                                             const ReferenceOptimum& claimed,
                                             double tolerance) {
  const ManifoldSpec& spec = instance.spec();
  const double r = instance.radius();
  const double z = zeta(r, spec.curvature);

  const double scale = instance.lipschitz() * r;
  const double budget_scale = 10.0 * scale / tolerance;
  const auto budget = static_cast<std::int64_t>(
      std::min(2.5e7, std::max(1e4, budget_scale * budget_scale)));

  Point x = instance.x_ref();
  double best = std::numeric_limits<double>::infinity();
  Point best_point = x;

  for (std::int64_t t = 1; t <= budget; ++t) {
    const SubgradientResult eval = evaluate(instance, x);
    if (eval.value < best) {
      best = eval.value;
      best_point = x;
      if (best <= claimed.value + 0.9 * tolerance &&
          best >= claimed.value - tolerance) {
        break;
      }
    }
    if (best < claimed.value - tolerance) {
      throw std::runtime_error(
          "reference_optimum: subgradient cross-check found a better value "
          "than the primary estimate");
    }
    const double grad_norm = metric_norm(spec, eval.subgradient);
    if (grad_norm < 1e-15) break;
    const double eta = r / std::sqrt(z * static_cast<double>(t));
    const Point moved =
        exp_map(spec, TangentVector{x, eval.subgradient.v * (-eta / grad_norm)});
    const double d = dist(spec, instance.x_ref(), moved);
    if (d <= r) {
      x = moved;
    } else {
      TangentVector lg = log_map(spec, instance.x_ref(), moved);
      lg.v *= r / d;
      x = exp_map(spec, lg);
    }
  }

  if (best > claimed.value + tolerance) {
    throw std::runtime_error(
        "reference_optimum: independent estimates disagree beyond tolerance");
  }
  if (best < claimed.value) {
    return ReferenceOptimum{best, best_point};
  }
  return claimed;
}

// All anchors within float noise of one geodesic through anchor 0? Returns
// the unit direction and the anchor parameters when so.
struct GeodesicFit {
  bool collinear = false;
  TangentVector direction;  // metric-unit, based at anchors[0]
  std::vector<double> params;
};

GeodesicFit fit_common_geodesic(const ManifoldSpec& spec,
                                const std::vector<Point>& anchors) {
  GeodesicFit fit;
  const Point& origin = anchors[0];
  double far_dist = 0.0;
  std::size_t far_index = 0;
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    const double d = dist(spec, origin, anchors[i]);
    if (d > far_dist) {
      far_dist = d;
      far_index = i;
    }
  }
  if (far_dist < 1e-12) {
    // Degenerate cloud: every anchor coincides with anchor 0.
    fit.collinear = true;
    fit.direction = TangentVector{origin, Eigen::VectorXd::Zero(
                                              spec.ambient_dim())};
    fit.params.assign(anchors.size(), 0.0);
    return fit;
  }
  TangentVector u = log_map(spec, origin, anchors[far_index]);
  u.v /= far_dist;  // metric-unit direction (model norm sqrt(K))

  fit.params.resize(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double t =
        model_inner(spec, log_map(spec, origin, anchors[i]).v, u.v) /
        spec.curvature;
    fit.params[i] = t;
    const Point on_line = exp_map(spec, TangentVector{origin, u.v * t});
    if (dist(spec, on_line, anchors[i]) > 1e-9) {
      return GeodesicFit{};  // not collinear
    }
  }
  fit.collinear = true;
  fit.direction = u;
  return fit;
}

// Dense scan plus ternary refinement of the restriction of the objective to
// a geodesic, over the part of the line inside the feasible ball.
ReferenceOptimum optimize_along_geodesic(const ProblemInstance& instance,
                                         const GeodesicFit& fit) {
  const ManifoldSpec& spec = instance.spec();
  const double r = instance.radius();
  auto at = [&](double t) {
    return exp_map(spec, TangentVector{fit.direction.base,
                                       fit.direction.v * t});
  };
  auto feasible = [&](double t) {
    return dist(spec, at(t), instance.x_ref()) <= r;
  };
  if (fit.direction.v.isZero(0.0)) {
    const Point p = fit.direction.base;
    return ReferenceOptimum{objective_value(instance, p), p};
  }

  const auto [lo_it, hi_it] =
      std::minmax_element(fit.params.begin(), fit.params.end());
  double t_in_lo = *lo_it, t_in_hi = *hi_it;

  // The ball meets the line in one interval (the ball is geodesically
  // convex); its endpoints are within 2r of the anchor parameters, and a
  // margin barely above 2r keeps the spherical bracket away from any
  // wrap-around re-entry of the ball.
  auto bisect_edge = [&](double inside, double outside) {
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (inside + outside);
      (feasible(mid) ? inside : outside) = mid;
    }
    return inside;
  };
  const double margin = 2.05 * r;
  const double t_lo = feasible(t_in_lo - margin)
                          ? t_in_lo - margin
                          : bisect_edge(t_in_lo, t_in_lo - margin);
  const double t_hi = feasible(t_in_hi + margin)
                          ? t_in_hi + margin
                          : bisect_edge(t_in_hi, t_in_hi + margin);

  auto value_at = [&](double t) { return objective_value(instance, at(t)); };

  const int grid = 4000;
  double best_t = t_lo;
  double best_value = value_at(t_lo);
  for (int i = 1; i <= grid; ++i) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) / grid;
    const double v = value_at(t);
    if (v < best_value) {
      best_value = v;
      best_t = t;
    }
  }
  const double h = (t_hi - t_lo) / grid;
  double a = std::max(t_lo, best_t - h);
  double b = std::min(t_hi, best_t + h);
  for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++i) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    if (value_at(m1) <= value_at(m2)) {
      b = m2;
    } else {
      a = m1;
    }
  }
  const double t_star = 0.5 * (a + b);
  const Point p = at(t_star);
  return ReferenceOptimum{objective_value(instance, p), p};
}

// Riemannian Weiszfeld iteration for the geometric median, driven to the
// float-level subgradient certificate |g| * 2r.
ReferenceOptimum weiszfeld_median(const ProblemInstance& instance) {
  const ManifoldSpec& spec = instance.spec();
  const auto& objective = std::get<GeometricMedian>(instance.objective());
  const auto& anchors = objective.anchors;
  const auto& weights = objective.weights;
  const double r = instance.radius();
  const double gap_target = 1e-11 * instance.lipschitz() * std::max(r, 1e-3);

  // Start from the best anchor.
  Point x = anchors[0];
  double fx = objective_value(instance, x);
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    const double v = objective_value(instance, anchors[i]);
    if (v < fx) {
      fx = v;
      x = anchors[i];
    }
  }

  int stall = 0;
  for (int iter = 0; iter < 50000 && stall < 60; ++iter) {
    // Pull direction, skipping terms whose anchor coincides with x.
    Eigen::VectorXd pull = Eigen::VectorXd::Zero(spec.ambient_dim());
    double inv_sum = 0.0;
    double at_anchor_weight = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      const double d = dist(spec, x, anchors[i]);
      const double w = weights(static_cast<Eigen::Index>(i));
      if (d < 1e-13) {
        at_anchor_weight += w;
        continue;
      }
      pull += (w / d) * log_map(spec, x, anchors[i]).v;
      inv_sum += w / d;
    }
    const double pull_norm =
        std::sqrt(std::max(0.0, model_inner(spec, pull, pull))) /
        spec.sqrt_curvature();
    if (pull_norm <= at_anchor_weight + gap_target / (2.0 * r)) {
      break;  // subgradient certificate holds (0 is in the subdifferential)
    }
    double step_scale =
        at_anchor_weight > 0.0
            ? (pull_norm - at_anchor_weight) / std::max(inv_sum, 1e-30)
            : 1.0 / std::max(inv_sum, 1e-30);
    Eigen::VectorXd direction = pull / (pull_norm * spec.sqrt_curvature());

    double tau = step_scale * pull_norm;  // full Weiszfeld step length
    bool improved = false;
    for (int halving = 0; halving < 60; ++halving) {
      Point candidate =
          exp_map(spec, TangentVector{x, direction * tau *
                                             spec.sqrt_curvature()});
      const double d_ref = dist(spec, instance.x_ref(), candidate);
      if (d_ref > r) {
        TangentVector lg = log_map(spec, instance.x_ref(), candidate);
        lg.v *= r / d_ref;
        candidate = exp_map(spec, lg);
      }
      const double fc = objective_value(instance, candidate);
      if (fc < fx) {
        x = candidate;
        improved = fc < fx - 1e-16 * (1.0 + std::abs(fx));
        fx = fc;
        break;
      }
      tau *= 0.5;
    }
    stall = improved ? 0 : stall + 1;
  }
  return ReferenceOptimum{fx, x};
}

ReferenceOptimum solver_estimate(const ProblemInstance& instance,
                                 double target_gap) {
  SolverConfig config;
  config.epsilon = std::min(
      0.5, target_gap / (instance.lipschitz() * instance.radius()));
  config.record_trace = false;
  const SolveResult result = solve(instance, config);
  return ReferenceOptimum{result.f_best, result.x_best};
}

}  // namespace

ReferenceOptimum reference_optimum(const ProblemInstance& instance,
                                   double tolerance) {
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("reference_optimum: tolerance must be "
                                "positive");
  }
  const ManifoldSpec& spec = instance.spec();

  if (const auto* obj = std::get_if<DistanceTo>(&instance.objective())) {
    return ReferenceOptimum{0.0, obj->target};
  }

  if (const auto* obj = std::get_if<GeometricMedian>(&instance.objective())) {
    if (obj->anchors.size() == 1) {
      return ReferenceOptimum{0.0, obj->anchors[0]};
    }
    if (obj->anchors.size() == 2) {
      const double w0 = obj->weights(0), w1 = obj->weights(1);
      const double d = dist(spec, obj->anchors[0], obj->anchors[1]);
      if (w0 > w1) return ReferenceOptimum{w1 * d, obj->anchors[0]};
      if (w1 > w0) return ReferenceOptimum{w0 * d, obj->anchors[1]};
      TangentVector half = log_map(spec, obj->anchors[0], obj->anchors[1]);
      half.v *= 0.5;
      return ReferenceOptimum{w0 * d, exp_map(spec, half)};
    }
  }

  const std::vector<Point>* anchors = anchors_of(instance.objective());
  if (anchors != nullptr && anchors->size() == 1) {
    return ReferenceOptimum{0.0, (*anchors)[0]};
  }
  if (anchors != nullptr) {
    const GeodesicFit fit = fit_common_geodesic(spec, *anchors);
    if (fit.collinear) {
      return optimize_along_geodesic(instance, fit);
    }
  }

  if (std::holds_alternative<GeometricMedian>(instance.objective())) {
    const ReferenceOptimum primary = weiszfeld_median(instance);
    return crosscheck_with_subgradient(instance, primary, tolerance);
  }
  const ReferenceOptimum primary =
      solver_estimate(instance, 1e-3 * tolerance);
  return crosscheck_with_subgradient(instance, primary, tolerance);
}

}  // namespace geoellipsoid
