#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "geoellipsoid/io.hpp"
#include "geoellipsoid/solver.hpp"
#include "geoellipsoid/subgradient.hpp"
#include "bench.hpp"
#include "instance_gen.hpp"

namespace {

using namespace geoellipsoid;

struct SolveArgs {
  std::string instance;
  double epsilon = 0.0;
  std::string method = "ellipsoid";
  std::optional<std::int64_t> max_queries;
  std::string trace;
  std::string out;
};

int cmd_solve(const SolveArgs& args) {
  if (!(args.epsilon > 0.0) || !(args.epsilon < 1.0)) {
    throw std::invalid_argument("--epsilon must lie in (0, 1)");
  }
  if (args.max_queries && *args.max_queries < 1) {
    throw std::invalid_argument("--max-queries must be >= 1");
  }
  const ProblemInstance instance = load_instance_file(args.instance);

  SolveResult result;
  if (args.method == "ellipsoid") {
    SolverConfig config;
    config.epsilon = args.epsilon;
    config.record_trace = !args.trace.empty();
    if (args.max_queries) config.max_total_queries = *args.max_queries;
    result = solve(instance, config);
  } else {
    BaselineConfig config;
    config.record_trace = !args.trace.empty();
    if (args.max_queries) config.max_queries = *args.max_queries;
    result = run_baseline(instance, config);
  }

  const std::string json =
      solve_result_to_json(result, instance, args.method, args.epsilon);
  if (args.out.empty()) {
    std::cout << json;
  } else {
    std::ofstream out(args.out);
    if (!out) throw std::runtime_error("cannot write " + args.out);
    out << json;
  }
  if (!args.trace.empty()) {
    std::ofstream out(args.trace);
    if (!out) throw std::runtime_error("cannot write " + args.trace);
    write_trace_csv(out, result.trace);
  }
  return result.complete ? 0 : 2;
}

struct GenArgs {
  tools::GenSpec spec;
  std::string out;
};

int cmd_gen(const GenArgs& args) {
  const nlohmann::json instance = tools::generate_instance_json(args.spec);
  std::ofstream out(args.out);
  if (!out) throw std::runtime_error("cannot write " + args.out);
  out << instance.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geodesically convex optimization on constant-curvature "
               "manifolds: cutting-plane solver, subgradient baseline, "
               "instance generator, benchmark harness"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "Run one method on one instance");
  solve_cmd->add_option("--instance", solve_args.instance, "Instance JSON file")
      ->required();
  solve_cmd->add_option("--epsilon", solve_args.epsilon,
                        "Relative target: gap <= epsilon * M * r")
      ->required();
  solve_cmd
      ->add_option("--method", solve_args.method, "ellipsoid or subgradient")
      ->check(CLI::IsMember({"ellipsoid", "subgradient"}));
  solve_cmd->add_option("--max-queries", solve_args.max_queries,
                        "Query budget (exit 2 when exhausted)");
  solve_cmd->add_option("--trace", solve_args.trace, "Write per-query CSV");
  solve_cmd->add_option("--out", solve_args.out,
                        "Write result JSON here instead of stdout");

  GenArgs gen_args;
  CLI::App* gen_cmd =
      app.add_subcommand("gen", "Generate a random problem instance");
  gen_cmd->add_option("--manifold", gen_args.spec.manifold,
                      "hyperbolic or spherical")
      ->required()
      ->check(CLI::IsMember({"hyperbolic", "spherical"}));
  gen_cmd->add_option("--dim", gen_args.spec.dim, "Manifold dimension (>= 2)")
      ->required();
  gen_cmd->add_option("--radius", gen_args.spec.radius, "Feasible ball radius")
      ->required();
  gen_cmd->add_option("--problem", gen_args.spec.problem,
                      "median or maxdist")
      ->required()
      ->check(CLI::IsMember({"median", "maxdist"}));
  gen_cmd->add_option("--points", gen_args.spec.points, "Number of anchors")
      ->required();
  gen_cmd->add_option("--seed", gen_args.spec.seed, "RNG seed")->required();
  gen_cmd->add_option("--curvature", gen_args.spec.curvature,
                      "Curvature magnitude (defaults: 1 hyperbolic, "
                      "min(1, (0.75/r)^2) spherical)");
  gen_cmd->add_option("--out", gen_args.out, "Output instance file")
      ->required();

  tools::BenchArgs bench_args;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Run an instance x epsilon x method suite");
  bench_cmd->add_option("--suite", bench_args.suite,
                        "Suite JSON file, or \"default\"")
      ->required();
  bench_cmd->add_option("--out", bench_args.out_dir,
                        "Directory for summary.csv and scaling.json")
      ->required();
  bench_cmd->add_flag("--stable-output", bench_args.stable_output,
                      "Write wall_time as 0 for byte-stable outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_args);
    if (gen_cmd->parsed()) return cmd_gen(gen_args);
    return tools::cmd_bench(bench_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
