#include "geoellipsoid/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace geoellipsoid {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InstanceFormatError(where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where + "." + key, "missing field");
  return *it;
}

double require_number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

int require_int(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

std::string require_string(const json& obj, const char* key,
                           const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<Point> parse_points(const json& arr, const ManifoldSpec& spec,
                                const TangentFrame& frame,
                                const std::string& where) {
  if (!arr.is_array() || arr.empty()) fail(where, "expected a non-empty array");
  std::vector<Point> points;
  points.reserve(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) {
    const json& row = arr[i];
    const std::string row_where = where + "[" + std::to_string(i) + "]";
    if (!row.is_array()) fail(row_where, "expected an array of coordinates");
    if (static_cast<int>(row.size()) != spec.dim)
      fail(row_where, "expected " + std::to_string(spec.dim) + " coordinates, got " +
                          std::to_string(row.size()));
    Eigen::VectorXd c(spec.dim);
    for (int j = 0; j < spec.dim; ++j) {
      if (!row[static_cast<size_t>(j)].is_number())
        fail(row_where + "[" + std::to_string(j) + "]", "expected a number");
      c(j) = row[static_cast<size_t>(j)].get<double>();
    }
    try {
      points.push_back(point_from_tangent_coords(spec, frame, c));
    } catch (const std::exception& e) {
      fail(row_where, e.what());
    }
  }
  return points;
}

// %.17g round-trips doubles exactly; also used for CSV fields.
std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ProblemInstance parse_instance_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InstanceFormatError(std::string("instance: ") + e.what());
  }
  if (!root.is_object()) fail("instance", "expected a JSON object");

  const std::string manifold = require_string(root, "manifold", "instance");
  ManifoldKind kind;
  if (manifold == "hyperbolic") {
    kind = ManifoldKind::Hyperbolic;
  } else if (manifold == "spherical") {
    kind = ManifoldKind::Spherical;
  } else {
    fail("instance.manifold", "expected \"hyperbolic\" or \"spherical\", got \"" +
                                  manifold + "\"");
  }

  const int dim = require_int(root, "dim", "instance");
  const double curvature = require_number(root, "curvature", "instance");
  const double radius = require_number(root, "radius", "instance");
  if (dim < 2) fail("instance.dim", "expected dim >= 2");
  if (!(curvature > 0.0)) fail("instance.curvature", "expected curvature > 0");
  if (!(radius > 0.0)) fail("instance.radius", "expected radius > 0");

  ManifoldSpec spec(kind, dim, curvature);
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(spec.ambient_dim());
  origin(0) = 1.0;
  Point x_ref = make_point(spec, origin);
  TangentFrame frame = orthonormal_frame(spec, x_ref);

  const json& obj = require(root, "objective", "instance");
  if (!obj.is_object()) fail("instance.objective", "expected an object");
  const std::string type = require_string(obj, "type", "instance.objective");

  const json& pts_json = require(obj, "points", "instance.objective");
  std::vector<Point> points =
      parse_points(pts_json, spec, frame, "instance.objective.points");

  Objective objective;
  if (type == "distance_to") {
    if (points.size() != 1)
      fail("instance.objective.points", "distance_to expects exactly one point");
    objective = DistanceTo{points[0]};
  } else if (type == "median") {
    Eigen::VectorXd weights =
        Eigen::VectorXd::Ones(static_cast<Eigen::Index>(points.size()));
    auto wit = obj.find("weights");
    if (wit != obj.end()) {
      const json& warr = *wit;
      if (!warr.is_array() || warr.size() != points.size())
        fail("instance.objective.weights",
             "expected an array matching the number of points");
      for (size_t i = 0; i < warr.size(); ++i) {
        if (!warr[i].is_number())
          fail("instance.objective.weights[" + std::to_string(i) + "]",
               "expected a number");
        weights(static_cast<Eigen::Index>(i)) = warr[i].get<double>();
      }
    }
    objective = GeometricMedian{std::move(points), std::move(weights)};
  } else if (type == "maxdist") {
    objective = MaxDistance{std::move(points)};
  } else {
    fail("instance.objective.type",
         "expected \"median\", \"maxdist\", or \"distance_to\", got \"" + type +
             "\"");
  }

  try {
    return ProblemInstance(spec, x_ref, radius, std::move(objective));
  } catch (const std::exception& e) {
    fail("instance", e.what());
  }
}

ProblemInstance load_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceFormatError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance_json(buf.str());
}

std::string solve_result_to_json(const SolveResult& result,
                                 const ProblemInstance& instance,
                                 const std::string& method, double epsilon) {
  const ManifoldSpec& spec = instance.spec();
  Eigen::VectorXd coords =
      tangent_coords(spec, instance.frame(), result.x_best);

  json j;
  j["method"] = method;
  j["manifold"] =
      spec.kind == ManifoldKind::Hyperbolic ? "hyperbolic" : "spherical";
  j["dim"] = spec.dim;
  j["curvature"] = spec.curvature;
  j["radius"] = instance.radius();
  j["epsilon"] = epsilon;
  j["f_best"] = result.f_best;
  json xb = json::array();
  for (int i = 0; i < coords.size(); ++i) xb.push_back(coords(i));
  j["x_best"] = xb;
  j["queries_used"] = result.queries_used;
  j["stages"] = result.stages;
  j["complete"] = result.complete;
  return j.dump(2) + "\n";
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "query,stage,inner_iter,feasible,value,best\n";
  for (const TraceRow& row : trace.rows) {
    out << row.query << ',' << row.stage << ',' << row.inner_iter << ','
        << (row.feasible ? 1 : 0) << ',';
    if (row.feasible && std::isfinite(row.value)) out << fmt_double(row.value);
    out << ',' << fmt_double(row.best) << '\n';
  }
}

}  // namespace geoellipsoid
