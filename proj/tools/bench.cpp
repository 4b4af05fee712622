#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "geoellipsoid/io.hpp"
#include "geoellipsoid/solver.hpp"
#include "geoellipsoid/subgradient.hpp"
#include "instance_gen.hpp"

namespace geoellipsoid::tools {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct SuiteEntry {
  std::string id;
  std::optional<ProblemInstance> instance;
  std::string load_error;

  std::once_flag ref_once;
  std::optional<double> ref_value;
  std::string ref_error;
};

struct Suite {
  std::vector<double> epsilons;
  std::vector<std::string> methods;
  std::int64_t subgradient_max_queries = 100000;
  std::vector<std::unique_ptr<SuiteEntry>> entries;
};

struct RowResult {
  std::string instance_id;
  std::string method;
  int dim = 0;
  double curvature = 0.0;
  double epsilon = 0.0;
  std::int64_t queries_used = 0;
  double final_gap = std::numeric_limits<double>::quiet_NaN();
  double wall_time_s = 0.0;
  std::string status = "ok";
  bool ok = false;
};

GenSpec parse_gen_spec(const json& g) {
  GenSpec spec;
  spec.manifold = g.at("manifold").get<std::string>();
  spec.dim = g.at("dim").get<int>();
  spec.radius = g.at("radius").get<double>();
  spec.problem = g.at("problem").get<std::string>();
  spec.points = g.at("points").get<int>();
  spec.seed = g.at("seed").get<std::uint64_t>();
  if (g.contains("curvature")) spec.curvature = g.at("curvature").get<double>();
  return spec;
}

Suite default_suite() {
  Suite suite;
  suite.epsilons = {1e-2, 1e-4, 1e-8};
  suite.methods = {"ellipsoid"};
  for (int dim : {3, 6, 12}) {
    for (double radius : {2.0, 4.0}) {
      GenSpec gen;
      gen.manifold = "hyperbolic";
      gen.dim = dim;
      gen.radius = radius;
      gen.problem = "median";
      gen.points = dim + 2;
      gen.seed = 1000 + 10 * static_cast<std::uint64_t>(dim) +
                 static_cast<std::uint64_t>(radius);
      auto entry = std::make_unique<SuiteEntry>();
      entry->id = "med-d" + std::to_string(dim) + "-r" +
                  std::to_string(static_cast<int>(radius));
      try {
        entry->instance =
            parse_instance_json(generate_instance_json(gen).dump());
      } catch (const std::exception& e) {
        entry->load_error = e.what();
      }
      suite.entries.push_back(std::move(entry));
    }
  }
  return suite;
}

Suite load_suite(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open suite file " + path.string());
  json root = json::parse(in);  // throws with position info on bad JSON

  Suite suite;
  for (const json& e : root.at("epsilons")) {
    const double eps = e.get<double>();
    if (!(eps > 0.0) || !(eps < 1.0)) {
      throw std::runtime_error("suite: epsilons must lie in (0, 1)");
    }
    suite.epsilons.push_back(eps);
  }
  for (const json& m : root.at("methods")) {
    suite.methods.push_back(m.get<std::string>());
  }
  if (suite.epsilons.empty() || suite.methods.empty()) {
    throw std::runtime_error("suite: epsilons and methods must be non-empty");
  }
  if (root.contains("subgradient_max_queries")) {
    suite.subgradient_max_queries =
        root.at("subgradient_max_queries").get<std::int64_t>();
    if (suite.subgradient_max_queries < 1) {
      throw std::runtime_error("suite: subgradient_max_queries must be >= 1");
    }
  }

  const fs::path base = path.parent_path();
  std::size_t index = 0;
  for (const json& item : root.at("instances")) {
    auto entry = std::make_unique<SuiteEntry>();
    try {
      if (item.contains("file")) {
        fs::path file = item.at("file").get<std::string>();
        if (file.is_relative()) file = base / file;
        entry->id = item.contains("id") ? item.at("id").get<std::string>()
                                        : file.stem().string();
        entry->instance = load_instance_file(file);
      } else if (item.contains("gen")) {
        entry->id = item.contains("id") ? item.at("id").get<std::string>()
                                        : "gen-" + std::to_string(index);
        entry->instance = parse_instance_json(
            generate_instance_json(parse_gen_spec(item.at("gen"))).dump());
      } else {
        throw std::runtime_error("instance entry needs \"file\" or \"gen\"");
      }
    } catch (const std::exception& e) {
      if (entry->id.empty()) entry->id = "instance-" + std::to_string(index);
      entry->load_error = e.what();
    }
    suite.entries.push_back(std::move(entry));
    ++index;
  }
  if (suite.entries.empty()) {
    throw std::runtime_error("suite: instances must be non-empty");
  }
  return suite;
}

// The cross-check budget caps near 2.5e7 subgradient steps, which certifies
// agreement only down to about M*r/500 in absolute value; ask for a little
// less than that. The returned reference value itself is far more accurate
// (closed form or Weiszfeld certificate) whenever such a path exists.
double reference_tolerance(const ProblemInstance& instance) {
  return std::max(2e-9, instance.lipschitz() * instance.radius() / 400.0);
}

void ensure_reference(SuiteEntry& entry) {
  std::call_once(entry.ref_once, [&entry] {
    try {
      entry.ref_value =
          reference_optimum(*entry.instance, reference_tolerance(*entry.instance))
              .value;
    } catch (const std::exception& e) {
      entry.ref_error = e.what();
    }
  });
}

RowResult run_row(SuiteEntry& entry, double epsilon, const std::string& method,
                  const Suite& suite) {
  RowResult row;
  row.instance_id = entry.id;
  row.method = method;
  row.epsilon = epsilon;
  if (!entry.instance) {
    row.status = "error: " + entry.load_error;
    return row;
  }
  const ProblemInstance& instance = *entry.instance;
  row.dim = instance.spec().dim;
  row.curvature = instance.spec().curvature;

  ensure_reference(entry);
  if (!entry.ref_value) {
    row.status = "error: reference failed: " + entry.ref_error;
    return row;
  }

  SolveResult result;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (method == "ellipsoid") {
      SolverConfig config;
      config.epsilon = epsilon;
      config.record_trace = false;
      result = solve(instance, config);
    } else if (method == "subgradient") {
      BaselineConfig config;
      config.max_queries = suite.subgradient_max_queries;
      config.record_trace = false;
      result = run_baseline(instance, config);
    } else {
      row.status = "error: unknown method \"" + method + "\"";
      return row;
    }
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
    return row;
  }
  const auto stop = std::chrono::steady_clock::now();
  row.wall_time_s = std::chrono::duration<double>(stop - start).count();
  row.queries_used = result.queries_used;
  row.final_gap = result.f_best - *entry.ref_value;

  if (row.final_gap < -1e-9) {
    row.status = "error: run value below reference";
  } else if (!result.complete) {
    row.status = "incomplete";
  } else {
    row.ok = true;
  }
  return row;
}

std::string csv_field(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

void write_summary(std::ostream& out, const std::vector<RowResult>& rows,
                   bool stable_output) {
  out << "instance,method,dim,curvature,epsilon,queries_used,final_gap,"
         "wall_time_s,status\n";
  for (const RowResult& row : rows) {
    char wall[64];
    std::snprintf(wall, sizeof(wall), "%.6f",
                  stable_output ? 0.0 : row.wall_time_s);
    out << sanitize(row.instance_id) << ',' << row.method << ',' << row.dim
        << ',' << csv_field(row.curvature) << ',' << csv_field(row.epsilon)
        << ',' << row.queries_used << ',' << csv_field(row.final_gap) << ','
        << wall << ',' << sanitize(row.status) << '\n';
  }
}

// Least-squares fit ln(queries) ~ a + b*ln(dim) + c*ln(ln(1/eps)) over the
// successful ellipsoid rows; b and c are the reported scaling exponents.
json scaling_report(const std::vector<RowResult>& rows) {
  std::vector<const RowResult*> used;
  for (const RowResult& row : rows) {
    if (row.ok && row.method == "ellipsoid" && row.queries_used > 0) {
      used.push_back(&row);
    }
  }
  json report;
  report["rows_used"] = used.size();
  if (used.size() < 3) return report;

  const auto n = static_cast<Eigen::Index>(used.size());
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const RowResult& row = *used[static_cast<std::size_t>(i)];
    x(i, 0) = 1.0;
    x(i, 1) = std::log(static_cast<double>(row.dim));
    x(i, 2) = std::log(std::log(1.0 / row.epsilon));
    y(i) = std::log(static_cast<double>(row.queries_used));
  }
  const Eigen::VectorXd theta = x.colPivHouseholderQr().solve(y);
  report["dim_exponent"] = theta(1);
  report["logeps_exponent"] = theta(2);
  return report;
}

int thread_count() {
  const char* env = std::getenv("GEOELLIPSOID_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  return std::clamp(std::atoi(env), 1, 64);
}

}  // namespace

int cmd_bench(const BenchArgs& args) {
  Suite suite =
      args.suite == "default" ? default_suite() : load_suite(args.suite);

  struct Cell {
    SuiteEntry* entry;
    double epsilon;
    std::string method;
  };
  std::vector<Cell> cells;
  for (auto& entry : suite.entries) {
    for (double eps : suite.epsilons) {
      for (const std::string& method : suite.methods) {
        cells.push_back(Cell{entry.get(), eps, method});
      }
    }
  }

  std::vector<RowResult> rows(cells.size());
  const int threads = thread_count();
  if (threads <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      rows[i] = run_row(*cells[i].entry, cells[i].epsilon, cells[i].method,
                        suite);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size();
             i = next.fetch_add(1)) {
          rows[i] = run_row(*cells[i].entry, cells[i].epsilon,
                            cells[i].method, suite);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "summary.csv");
    if (!out) {
      throw std::runtime_error("cannot write " +
                               (out_dir / "summary.csv").string());
    }
    write_summary(out, rows, args.stable_output);
  }
  {
    std::ofstream out(out_dir / "scaling.json");
    if (!out) {
      throw std::runtime_error("cannot write " +
                               (out_dir / "scaling.json").string());
    }
    out << scaling_report(rows).dump(2) << '\n';
  }

  const bool all_ok =
      std::all_of(rows.begin(), rows.end(),
                  [](const RowResult& row) { return row.ok; });
  return all_ok ? 0 : 1;
}

}  // namespace geoellipsoid::tools
