#pragma once

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>

#include "geoellipsoid/problems.hpp"
#include "geoellipsoid/solver.hpp"

namespace geoellipsoid {

/// Raised on malformed instance files; the message names the offending field
/// or the parse position.
class InstanceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a problem instance from JSON text of the form
///   {
///     "manifold": "hyperbolic" | "spherical",
///     "dim": d,
///     "curvature": K,
///     "radius": r,
///     "objective": {
///       "type": "median" | "maxdist" | "distance_to",
///       "points": [[c_1..c_d], ...],   // tangent coordinates at x_ref
///       "weights": [w_1, ...]          // median only; omitted => all 1
///     }
///   }
/// x_ref is the model origin (1, 0, ..., 0); point coordinates are metric
/// lengths in its canonical frame.
ProblemInstance parse_instance_json(const std::string& text);

ProblemInstance load_instance_file(const std::filesystem::path& path);

/// Serializes a solve result (either method) with the instance context.
/// Deterministic: repeated calls produce identical bytes.
std::string solve_result_to_json(const SolveResult& result,
                                 const ProblemInstance& instance,
                                 const std::string& method, double epsilon);

/// Writes "query,stage,inner_iter,feasible,value,best" rows; `value` is the
/// empty field for infeasible queries. Deterministic formatting.
void write_trace_csv(std::ostream& out, const Trace& trace);

}  // namespace geoellipsoid
