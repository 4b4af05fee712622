#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace geoellipsoid::tools {

/// Parameters of a random instance. `curvature` defaults to 1 on hyperbolic
/// space; on the sphere it defaults to min(1, (0.75/radius)^2) so that the
/// feasible ball stays strictly inside a hemisphere with distance objectives
/// convex on it.
struct GenSpec {
  std::string manifold;  // "hyperbolic" | "spherical"
  int dim = 3;
  double radius = 1.0;
  std::string problem;  // "median" | "maxdist"
  int points = 5;
  std::uint64_t seed = 0;
  std::optional<double> curvature;
};

/// Deterministic instance JSON: anchors sampled uniformly in the tangent
/// coordinate ball of radius 0.9 * radius, unit weights. The result parses
/// into a valid ProblemInstance (validated before returning); invalid
/// parameters throw std::invalid_argument.
nlohmann::json generate_instance_json(const GenSpec& spec);

}  // namespace geoellipsoid::tools
