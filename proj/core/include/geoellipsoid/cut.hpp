#pragma once

#include <Eigen/Core>

namespace geoellipsoid {

/// Whether a cut comes from the objective or from a violated constraint.
enum class CutKind { Objective, Feasibility };

/// Halfspace cut in chart coordinates: the retained region is
/// { z : <normal, z - anchor> <= 0 }. Normals are unit length.
struct EuclideanCut {
  Eigen::VectorXd anchor;
  Eigen::VectorXd normal;
  CutKind kind;
};

}  // namespace geoellipsoid
