#pragma once

#include <string>

namespace geoellipsoid::tools {

struct BenchArgs {
  std::string suite;    // suite file path, or "default"
  std::string out_dir;  // receives summary.csv and scaling.json
  bool stable_output = false;  // write wall_time as 0 for byte-stable files
};

/// Runs every instance x epsilon x method cell of the suite, writes
/// summary.csv (one row per cell) and scaling.json (fitted query-count
/// exponents for the ellipsoid method). Returns 0 when every row succeeded,
/// 1 otherwise. GEOELLIPSOID_THREADS caps row parallelism (default 1).
int cmd_bench(const BenchArgs& args);

}  // namespace geoellipsoid::tools
