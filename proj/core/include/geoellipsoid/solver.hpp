#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "geoellipsoid/problems.hpp"

namespace geoellipsoid {

/// One oracle interaction. `value` is NaN for infeasible queries; `best` is
/// the best feasible value seen up to and including this query.
struct TraceRow {
  std::int64_t query = 0;      // global index, 1-based, strictly increasing
  std::int32_t stage = 0;      // 1-based stage; 0 for the baseline method
  std::int64_t inner_iter = 0; // 1-based within the stage
  bool feasible = false;
  double value = 0.0;
  double best = 0.0;
};

struct Trace {
  std::vector<TraceRow> rows;
};

struct SolverConfig {
  double epsilon = 1e-4;            // relative target: gap <= epsilon * M * r
  double subproblem_safety = 4.0;   // multiplier on the iteration budget
  std::int64_t max_total_queries =
      std::numeric_limits<std::int64_t>::max() / 4;
  std::uint64_t seed = 0;           // reserved; the solver is deterministic
  bool record_trace = true;
};

struct SolveResult {
  Point x_best;
  double f_best = 0.0;
  std::int64_t queries_used = 0;
  std::int32_t stages = 0;
  bool complete = true;  // false when the query budget ran out first
  Trace trace;
};

/// Curvature overhead factor zeta(s) = s / tanh(s) at s = r * sqrt(K);
/// tends to 1 as s -> 0 and grows linearly in s.
double zeta(double radius, double curvature);

/// Approximately minimizes the objective over B(center, ball_radius)
/// intersected with the feasible ball, by running the central-cut loop in
/// the geodesic chart at `center`. Returns the best feasible query; the
/// first query is always `center` itself, so the result never regresses.
/// ball_radius is in metric length units and must map inside the chart.
struct SubproblemResult {
  Point x_next;
  double f_value = 0.0;
  std::int64_t queries_used = 0;
};

SubproblemResult solve_subproblem(const ProblemInstance& instance,
                                  const Point& center, double ball_radius,
                                  double eps_sub,
                                  const SolverConfig& config = {});

/// Multi-stage solve to f(x) - f* <= epsilon * M * radius.
///
/// With R = 1/sqrt(K): when radius <= R a single chart already covers the
/// feasible ball and one subproblem with target epsilon*M*radius suffices.
/// Otherwise T = ceil(2 * (radius/R) * ln(2/epsilon)) stages run, each
/// solving over B(x_k, R) to tolerance (epsilon/4)*M*R and recentering the
/// chart at the stage result. The best feasible query across all stages is
/// returned. Exceeding max_total_queries stops the run mid-stage with
/// complete = false and the best point found so far.
SolveResult solve(const ProblemInstance& instance, const SolverConfig& config);

}  // namespace geoellipsoid
