#include "instance_gen.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "geoellipsoid/io.hpp"

namespace geoellipsoid::tools {

namespace {

// mt19937_64 output mapped through fixed arithmetic; keeps the stream
// identical across standard libraries, unlike std::uniform_real_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {  // Box-Muller with a cached spare
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = mag * std::sin(ang);
    has_spare_ = true;
    return mag * std::cos(ang);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

nlohmann::json generate_instance_json(const GenSpec& spec) {
  if (spec.manifold != "hyperbolic" && spec.manifold != "spherical") {
    throw std::invalid_argument("gen: manifold must be hyperbolic or "
                                "spherical");
  }
  if (spec.problem != "median" && spec.problem != "maxdist") {
    throw std::invalid_argument("gen: problem must be median or maxdist");
  }
  if (spec.dim < 2) throw std::invalid_argument("gen: dim must be >= 2");
  if (!(spec.radius > 0.0)) {
    throw std::invalid_argument("gen: radius must be positive");
  }
  if (spec.points < 1) throw std::invalid_argument("gen: points must be >= 1");
  if (spec.curvature && !(*spec.curvature > 0.0)) {
    throw std::invalid_argument("gen: curvature must be positive");
  }

  double curvature;
  if (spec.curvature) {
    curvature = *spec.curvature;
  } else if (spec.manifold == "hyperbolic") {
    curvature = 1.0;
  } else {
    // Keep r * sqrt(K) <= 0.75 so distance objectives stay convex on the
    // ball (anchors and queries within a quarter great-circle).
    const double s = 0.75 / spec.radius;
    curvature = std::min(1.0, s * s);
  }

  Rng rng(spec.seed);
  const double ball = 0.9 * spec.radius;

  nlohmann::json points = nlohmann::json::array();
  for (int p = 0; p < spec.points; ++p) {
    std::vector<double> dir(static_cast<std::size_t>(spec.dim));
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (auto& c : dir) {
        c = rng.gaussian();
        norm2 += c * c;
      }
    } while (norm2 < 1e-24);
    const double len =
        ball * std::pow(rng.uniform(), 1.0 / static_cast<double>(spec.dim));
    const double scale = len / std::sqrt(norm2);
    nlohmann::json row = nlohmann::json::array();
    for (double c : dir) row.push_back(c * scale);
    points.push_back(std::move(row));
  }

  nlohmann::json objective;
  objective["type"] = spec.problem;
  objective["points"] = std::move(points);
  if (spec.problem == "median") {
    nlohmann::json weights = nlohmann::json::array();
    for (int p = 0; p < spec.points; ++p) weights.push_back(1.0);
    objective["weights"] = std::move(weights);
  }

  nlohmann::json root;
  root["manifold"] = spec.manifold;
  root["dim"] = spec.dim;
  root["curvature"] = curvature;
  root["radius"] = spec.radius;
  root["objective"] = std::move(objective);

  // Round-trip through the loader: surfaces any invariant violation (e.g.
  // a spherical radius at or beyond the hemisphere) as a thrown error.
  parse_instance_json(root.dump());
  return root;
}

}  // namespace geoellipsoid::tools
