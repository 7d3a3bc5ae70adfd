// Command-line front end: run benchmark campaigns, solve the engineering
// problems, compare result files, list problem ids.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ranges.h>

#include "fwsc/benchmarks.hpp"
#include "fwsc/constrained.hpp"
#include "fwsc/harness.hpp"

namespace {

using namespace fwsc;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> iterations;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "key = value experiment file");
  cmd->add_option("--seed", opts.seed, "master seed");
  cmd->add_option("--runs", opts.runs, "independent runs per problem");
  cmd->add_option("--iterations", opts.iterations, "generations per run");
  cmd->add_option("--out", opts.out, "output directory");
}

harness::ExperimentConfig build_config(const CommonOptions& opts) {
  harness::ExperimentConfig config;
  if (!opts.config_path.empty()) config = harness::load_config(opts.config_path);
  if (opts.seed) config.seed = *opts.seed;
  if (opts.runs) config.runs = *opts.runs;
  if (opts.iterations) config.params.max_iterations = *opts.iterations;
  if (!opts.out.empty()) config.out_dir = opts.out;
  config.validate();
  return config;
}

void list_problems() {
  fmt::print("{:<5} {:<24} {:<4} {:<22} {}\n", "id", "name", "cat", "range", "dimensions");
  for (const auto& s : bench::all_specs()) {
    const std::string range = fmt::format("[{:g}, {:g}]", s.range_lo, s.range_hi);
    fmt::print("{:<5} {:<24} {:<4} {:<22} {}\n", s.id, s.name, bench::to_string(s.category), range,
               fmt::join(s.allowed_dimensions, ","));
  }
  fmt::print("\nengineering:");
  for (const auto& id : constrained::problem_ids()) fmt::print(" {}", id);
  fmt::print("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fig tree / wasp coevolutionary optimizer"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::vector<std::string> run_problems;
  std::vector<std::size_t> run_dims;
  bool run_trace = false;
  auto* run_cmd = app.add_subcommand("run", "run a benchmark campaign and write summary.csv");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("--problem", run_problems, "benchmark id(s), e.g. F1 F9");
  run_cmd->add_option("--dim", run_dims, "dimension(s) for scalable functions");
  run_cmd->add_flag("--trace", run_trace, "write one trace file per run");

  CommonOptions eng_opts;
  std::string eng_id;
  auto* eng_cmd = app.add_subcommand("engineering", "solve a constrained design problem");
  add_common(eng_cmd, eng_opts);
  eng_cmd->add_option("problem", eng_id, "pressure-vessel, stepped-beam or welded-beam")
      ->required();

  std::vector<std::string> stats_inputs;
  std::string stats_metric = "mean";
  std::string stats_reference;
  std::string stats_out = ".";
  auto* stats_cmd = app.add_subcommand("stats", "Friedman ranking and Wilcoxon tests");
  stats_cmd->add_option("inputs", stats_inputs, "summary CSVs, optionally NAME=path")
      ->required()
      ->expected(2, -1);
  stats_cmd->add_option("--metric", stats_metric, "mean or best");
  stats_cmd->add_option("--reference", stats_reference, "algorithm compared against (default: last)");
  stats_cmd->add_option("--out", stats_out, "output directory");

  app.add_subcommand("list", "list problem ids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      harness::ExperimentConfig config = build_config(run_opts);
      if (!run_problems.empty()) config.problems = run_problems;
      if (!run_dims.empty()) config.dimensions = run_dims;
      if (run_trace) config.trace = true;
      harness::expand_cases(config);
      const auto files = harness::cmd_run(config, harness::worker_count());
      fmt::print("wrote {} file(s) to {}\n", files.size(), config.out_dir.string());
    } else if (eng_cmd->parsed()) {
      const harness::ExperimentConfig config = build_config(eng_opts);
      const auto report = harness::cmd_engineering(eng_id, config, harness::worker_count());
      fmt::print("{}", harness::format_report(report));
    } else if (stats_cmd->parsed()) {
      const harness::Metric metric = harness::parse_metric(stats_metric);
      std::vector<harness::AlgorithmResults> inputs;
      for (const auto& arg : stats_inputs) inputs.push_back(harness::load_results_arg(arg, metric));
      const auto report = harness::compare(inputs, stats_reference);
      harness::cmd_stats(inputs, stats_reference, stats_out);
      fmt::print("{}", harness::friedman_csv(report));
      fmt::print("chi-square {:.6g}, p = {:.6g}\n", report.test.chi_square, report.test.p_value);
      fmt::print("{}", harness::wilcoxon_csv(report));
    } else {
      list_problems();
    }
  } catch (const harness::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const harness::MismatchError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
