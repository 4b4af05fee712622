#pragma once

// Hand-rolled deterministic generators for the property tests. splitmix64
// keeps every sequence identical across platforms and standard-library
// versions, so failures reproduce from the seed alone.

#include <Eigen/Core>

#include <cmath>
#include <cstdint>

#include "geoellipsoid/manifold.hpp"

namespace geotest {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int index(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  double gaussian() {
    // Box-Muller, spare discarded so call sites stay order-independent.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586 * u2);
  }

  Eigen::VectorXd gaussian_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = gaussian();
    return v;
  }

  Eigen::VectorXd unit_vector(int n) {
    while (true) {
      Eigen::VectorXd v = gaussian_vector(n);
      const double nrm = v.norm();
      if (nrm > 1e-12) return v / nrm;
    }
  }

  // Uniform over the Euclidean ball of the given radius.
  Eigen::VectorXd in_ball(int n, double radius) {
    const double scale =
        radius * std::pow(uniform(), 1.0 / static_cast<double>(n));
    return unit_vector(n) * scale;
  }

 private:
  std::uint64_t state_;
};

inline geoellipsoid::Point model_origin(const geoellipsoid::ManifoldSpec& spec) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(spec.ambient_dim());
  x(0) = 1.0;
  return geoellipsoid::make_point(spec, std::move(x));
}

// Uniform-ish point with metric distance <= radius from `center`.
inline geoellipsoid::Point random_point_in_ball(
    const geoellipsoid::ManifoldSpec& spec, const geoellipsoid::Point& center,
    double radius, Rng& rng) {
  const geoellipsoid::TangentFrame frame =
      geoellipsoid::orthonormal_frame(spec, center);
  return geoellipsoid::point_from_tangent_coords(
      spec, frame, rng.in_ball(spec.dim, radius));
}

// Tangent vector at `base` with metric norm exactly `norm`.
inline geoellipsoid::TangentVector random_tangent(
    const geoellipsoid::ManifoldSpec& spec, const geoellipsoid::Point& base,
    double norm, Rng& rng) {
  const geoellipsoid::TangentFrame frame =
      geoellipsoid::orthonormal_frame(spec, base);
  const Eigen::VectorXd dir = rng.unit_vector(spec.dim);
  geoellipsoid::TangentVector v;
  v.base = base;
  v.v = frame.basis * (dir * (norm * spec.sqrt_curvature()));
  return v;
}

}  // namespace geotest
