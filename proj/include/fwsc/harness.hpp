#pragma once

// Batch experiment harness behind the command-line tool: configuration,
// seeded multi-run campaigns, CSV output, engineering reports and the
// statistical comparison of result files.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fwsc/constrained.hpp"
#include "fwsc/engine.hpp"
#include "fwsc/stats.hpp"

namespace fwsc::harness {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr std::size_t kDefaultDimension = 30;

/// Invalid configuration. field() names the offending key.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

struct ExperimentConfig {
  std::vector<std::string> problems;
  /// Empty: 30 for scalable functions, the fixed dimension otherwise.
  std::vector<std::size_t> dimensions;
  std::size_t runs = 30;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "results";
  bool trace = false;
  FwscParams params;
  double penalty = constrained::kDefaultPenalty;

  /// Checks everything except problem ids. Throws ConfigError.
  void validate() const;
};

/// key = value lines; '#' starts a comment. `schema_version` is required.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct Case {
  std::string problem;
  std::size_t dimension;
};

/// Benchmark (problem, dimension) pairs in config order. Throws ConfigError
/// for unknown ids or dimensions a function does not support.
std::vector<Case> expand_cases(const ExperimentConfig& config);

std::uint64_t run_seed(std::uint64_t master_seed, std::string_view problem,
                       std::size_t dimension, std::size_t run_index);

/// FWSC_WORKERS if set, else the hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls task(i) for i in [0, count) on up to `workers` threads. The first
/// exception thrown by a task is rethrown after all threads finish.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

/// All files land or none do: each is written to a temporary sibling and
/// renamed once every write succeeded.
void write_files_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files);

struct RunRecord {
  std::string problem;
  std::size_t dimension = 0;
  std::size_t run_index = 0;
  RunResult result;
};

struct SummaryRow {
  std::string problem;
  std::size_t dimension = 0;
  std::size_t runs = 0;
  double best = 0.0;
  double worst = 0.0;
  double mean = 0.0;
  double std = 0.0;  // population
};

SummaryRow summarize(std::string problem, std::size_t dimension,
                     const std::vector<double>& final_values);

struct Campaign {
  std::vector<RunRecord> runs;  // ordered by case, then run index
  std::vector<SummaryRow> summary;
};

Campaign run_campaign(const ExperimentConfig& config, std::size_t workers);

std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string runs_csv(const std::vector<RunRecord>& runs);
/// iteration,best_so_far. A run without generations gets a single row 0.
std::string trace_csv(const RunResult& result);
std::string trace_file_name(const RunRecord& record);

/// Validates, runs and writes summary.csv, runs.csv and (with trace) one
/// trace file per run into config.out_dir. Returns the written paths.
std::vector<std::filesystem::path> cmd_run(const ExperimentConfig& config, std::size_t workers);

struct EngineeringReport {
  std::string problem;
  std::vector<std::string> variable_names;
  Vector position;  // repaired: discrete coordinates on their lattice
  double objective = 0.0;
  double max_violation = 0.0;
  bool feasible = false;
  double penalized = 0.0;
  std::size_t runs = 0;
  std::uint64_t evaluations = 0;
};

/// Best feasible design seen by any run; the best penalized design when no
/// evaluated point was feasible. Throws std::invalid_argument for unknown ids.
EngineeringReport solve_engineering(std::string_view problem_id, const ExperimentConfig& config,
                                    std::size_t workers);

std::string format_report(const EngineeringReport& report);
std::string report_csv(const EngineeringReport& report);

/// Solves, writes engineering_<id>.csv into config.out_dir and returns the report.
EngineeringReport cmd_engineering(std::string_view problem_id, const ExperimentConfig& config,
                                  std::size_t workers);

enum class Metric { mean, best };
Metric parse_metric(std::string_view text);

/// One column of a comparison: per-problem values of one algorithm.
struct AlgorithmResults {
  std::string name;
  std::vector<std::string> problems;  // row keys, "F1" or "F1@30"
  std::vector<double> values;
};

/// Reads a summary CSV (columns problem, [dimension], mean, best).
AlgorithmResults load_results(const std::filesystem::path& path, std::string name,
                              Metric metric);

/// "NAME=path" or a bare path. A bare path is named after its stem, or after
/// its parent directory when the stem is "summary".
AlgorithmResults load_results_arg(std::string_view arg, Metric metric);

/// Raised when result files do not cover the same problems.
class MismatchError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct WilcoxonRow {
  std::string comparison;  // "A vs B"
  double p_value = 1.0;
  double t_plus = 0.0;     // rank sum of problems where A is lower
  double t_minus = 0.0;
  std::string winner;      // lower values win; "tie" on equal rank sums
  std::string note;        // "", "not significant", "no information"
  bool no_information = false;
};

/// Signed-rank comparison of a against b under minimization.
WilcoxonRow compare_pair(const AlgorithmResults& a, const AlgorithmResults& b);

struct StatsReport {
  stats::ResultMatrix matrix;
  stats::FriedmanRanks ranks;
  stats::FriedmanTest test;
  std::vector<WilcoxonRow> wilcoxon;  // every other algorithm vs the reference
};

/// Aligns rows by problem key (first input's order) and runs both tests.
/// `reference` defaults to the last input. Throws MismatchError.
StatsReport compare(const std::vector<AlgorithmResults>& inputs, std::string reference = {});

std::string friedman_csv(const StatsReport& report);
std::string friedman_test_csv(const StatsReport& report);
std::string wilcoxon_csv(const StatsReport& report);

/// Writes friedman.csv, friedman_test.csv and wilcoxon.csv into out_dir.
std::vector<std::filesystem::path> cmd_stats(const std::vector<AlgorithmResults>& inputs,
                                             const std::string& reference,
                                             const std::filesystem::path& out_dir);

}  // namespace fwsc::harness
