#include "fwsc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/core.h>

#include "fwsc/benchmarks.hpp"
#include "fwsc/csv.hpp"

namespace fwsc::harness {

namespace fs = std::filesystem;

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(fmt::format("config field '{}': {}", field, message)),
      field_(std::move(field)) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto end = comma == std::string_view::npos ? value.size() : comma;
    const auto item = trim(value.substr(start, end - start));
    if (!item.empty()) items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

template <typename T>
T parse_integer(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key), fmt::format("expected a non-negative integer, got '{}'", text));
  }
  return value;
}

double parse_real(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() ||
      !std::isfinite(value)) {
    throw ConfigError(std::string(key), fmt::format("expected a finite number, got '{}'", text));
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(std::string(key), fmt::format("expected true or false, got '{}'", text));
}

using Setter = void (*)(ExperimentConfig&, std::string_view key, std::string_view value);

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"problems", [](ExperimentConfig& c, std::string_view, std::string_view v) {
         c.problems = split_list(v);
       }},
      {"dimensions", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.dimensions.clear();
         for (const auto& item : split_list(v)) {
           c.dimensions.push_back(parse_integer<std::size_t>(k, item));
         }
       }},
      {"runs", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.runs = parse_integer<std::size_t>(k, v);
       }},
      {"seed", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.seed = parse_integer<std::uint64_t>(k, v);
       }},
      {"out", [](ExperimentConfig& c, std::string_view, std::string_view v) { c.out_dir = v; }},
      {"trace", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.trace = parse_bool(k, v);
       }},
      {"num_trees", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.params.num_trees = parse_integer<std::size_t>(k, v);
       }},
      {"figs_per_tree", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.params.figs_per_tree = parse_integer<std::size_t>(k, v);
       }},
      {"wasps_per_fig", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.params.wasps_per_fig = parse_integer<std::size_t>(k, v);
       }},
      {"eta0", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.params.eta0 = parse_real(k, v);
       }},
      {"theta", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.params.wind_threshold = parse_real(k, v);
       }},
      {"decay_horizon", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         if (v == "none") {
           c.params.decay_horizon.reset();
         } else {
           c.params.decay_horizon = parse_real(k, v);
         }
       }},
      {"decay_ratio", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.params.decay_ratio = parse_real(k, v);
       }},
      {"scale", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         if (v == "range") {
           c.params.scale = NeighborhoodScale::range;
         } else if (v == "absolute") {
           c.params.scale = NeighborhoodScale::absolute;
         } else {
           throw ConfigError(std::string(k), fmt::format("expected range or absolute, got '{}'", v));
         }
       }},
      {"max_iterations", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.params.max_iterations = parse_integer<std::size_t>(k, v);
       }},
      {"wind_fraction", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.params.wind_fraction = parse_real(k, v);
       }},
      {"stagnation_window", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         if (v == "none") {
           c.params.stagnation_window.reset();
         } else {
           c.params.stagnation_window = parse_integer<std::size_t>(k, v);
         }
       }},
      {"penalty", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.penalty = parse_real(k, v);
       }},
  };
  return table;
}

// Maps an engine parameter complaint onto the config key that controls it.
std::string param_field(const std::string& message) {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"num_trees", "num_trees"},         {"figs_per_tree", "figs_per_tree"},
      {"wasps_per_fig", "wasps_per_fig"}, {"eta0", "eta0"},
      {"wind_threshold", "theta"},        {"wind_fraction", "wind_fraction"},
      {"decay horizon", "decay_horizon"}, {"stagnation_window", "stagnation_window"}};
  for (const auto& [needle, key] : keys) {
    if (message.find(needle) != std::string::npos) return key;
  }
  return "params";
}

}  // namespace

void ExperimentConfig::validate() const {
  if (runs < 1) throw ConfigError("runs", "must be at least 1");
  if (!(penalty > 0.0)) throw ConfigError("penalty", "must be positive");
  if (out_dir.empty()) throw ConfigError("out", "must not be empty");
  try {
    params.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(param_field(e.what()), e.what());
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto newline = text.find('\n', start);
    const auto end = newline == std::string_view::npos ? text.size() : newline;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), fmt::format("line {}: expected key = value", line_no));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.emplace(key).second) {
      throw ConfigError(std::string(key), fmt::format("line {}: duplicate key", line_no));
    }
    if (key == "schema_version") {
      const int version = parse_integer<int>(key, value);
      if (version != kConfigSchemaVersion) {
        throw ConfigError("schema_version", fmt::format("unsupported version {} (expected {})",
                                                        version, kConfigSchemaVersion));
      }
      continue;
    }
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError(std::string(key), fmt::format("line {}: unknown key", line_no));
    }
    it->second(config, key, value);
  }
  if (!seen.contains("schema_version")) {
    throw ConfigError("schema_version", "missing");
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", fmt::format("cannot open {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::vector<Case> expand_cases(const ExperimentConfig& config) {
  if (config.problems.empty()) throw ConfigError("problems", "no problems given");
  std::vector<Case> cases;
  for (const auto& id : config.problems) {
    const bench::BenchmarkSpec* spec = nullptr;
    try {
      spec = &bench::spec(id);
    } catch (const bench::BenchmarkError& e) {
      throw ConfigError("problems", e.what());
    }
    if (config.dimensions.empty()) {
      const std::size_t dim =
          spec->allows(kDefaultDimension) ? kDefaultDimension : spec->allowed_dimensions.front();
      cases.push_back({spec->id, dim});
      continue;
    }
    for (std::size_t dim : config.dimensions) {
      if (!spec->allows(dim)) {
        throw ConfigError("dimensions", fmt::format("{} does not support dimension {}", spec->id, dim));
      }
      cases.push_back({spec->id, dim});
    }
  }
  return cases;
}

std::uint64_t run_seed(std::uint64_t master_seed, std::string_view problem,
                       std::size_t dimension, std::size_t run_index) {
  std::uint64_t s = derive_seed(master_seed, hash_label(problem));
  s = derive_seed(s, dimension);
  return derive_seed(s, run_index);
}

std::size_t worker_count() {
  if (const char* env = std::getenv("FWSC_WORKERS")) {
    std::size_t n = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec == std::errc() && ptr == text.data() + text.size() && n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

void write_files_atomically(const std::vector<std::pair<fs::path, std::string>>& files) {
  std::vector<fs::path> staged;
  try {
    for (const auto& [path, content] : files) {
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      fs::path tmp = path;
      tmp += ".partial";
      staged.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw std::runtime_error(fmt::format("failed to write {}", tmp.string()));
    }
    for (std::size_t i = 0; i < files.size(); ++i) fs::rename(staged[i], files[i].first);
  } catch (...) {
    std::error_code ignored;
    for (const auto& tmp : staged) fs::remove(tmp, ignored);
    throw;
  }
}

SummaryRow summarize(std::string problem, std::size_t dimension,
                     const std::vector<double>& final_values) {
  if (final_values.empty()) throw std::invalid_argument("summarize: no runs");
  SummaryRow row;
  row.problem = std::move(problem);
  row.dimension = dimension;
  row.runs = final_values.size();
  row.best = *std::min_element(final_values.begin(), final_values.end());
  row.worst = *std::max_element(final_values.begin(), final_values.end());
  double sum = 0.0;
  for (double v : final_values) sum += v;
  const double n = static_cast<double>(final_values.size());
  // Rounding in the mean can step just outside [best, worst] for equal values.
  row.mean = std::clamp(sum / n, row.best, row.worst);
  double sq = 0.0;
  for (double v : final_values) sq += (v - row.mean) * (v - row.mean);
  row.std = std::sqrt(sq / n);
  return row;
}

Campaign run_campaign(const ExperimentConfig& config, std::size_t workers) {
  config.validate();
  const std::vector<Case> cases = expand_cases(config);
  std::vector<ObjectiveProblem> problems;
  problems.reserve(cases.size());
  for (const auto& c : cases) problems.push_back(bench::make_benchmark(c.problem, c.dimension));

  Campaign campaign;
  campaign.runs.resize(cases.size() * config.runs);
  parallel_for(campaign.runs.size(), workers, [&](std::size_t job) {
    const std::size_t case_index = job / config.runs;
    const std::size_t run_index = job % config.runs;
    const Case& c = cases[case_index];
    RunRecord& record = campaign.runs[job];
    record.problem = c.problem;
    record.dimension = c.dimension;
    record.run_index = run_index;
    record.result = run(problems[case_index], config.params,
                        run_seed(config.seed, c.problem, c.dimension, run_index));
  });

  for (std::size_t i = 0; i < cases.size(); ++i) {
    std::vector<double> finals;
    for (std::size_t r = 0; r < config.runs; ++r) {
      finals.push_back(campaign.runs[i * config.runs + r].result.best_fitness);
    }
    campaign.summary.push_back(summarize(cases[i].problem, cases[i].dimension, finals));
  }
  return campaign;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = csv::format_row({"problem", "dimension", "runs", "best", "worst", "mean", "std"});
  for (const auto& r : rows) {
    out += csv::format_row({r.problem, std::to_string(r.dimension), std::to_string(r.runs),
                            csv::format_number(r.best), csv::format_number(r.worst),
                            csv::format_number(r.mean), csv::format_number(r.std)});
  }
  return out;
}

std::string runs_csv(const std::vector<RunRecord>& runs) {
  std::string out = csv::format_row(
      {"problem", "dimension", "run", "seed", "best", "evaluations", "generations"});
  for (const auto& r : runs) {
    out += csv::format_row({r.problem, std::to_string(r.dimension), std::to_string(r.run_index),
                            std::to_string(r.result.seed), csv::format_number(r.result.best_fitness),
                            std::to_string(r.result.evaluations),
                            std::to_string(r.result.iterations_run)});
  }
  return out;
}

std::string trace_csv(const RunResult& result) {
  std::string out = csv::format_row({"iteration", "best_so_far"});
  if (result.trace.empty()) {
    out += csv::format_row({"0", csv::format_number(result.best_fitness)});
  }
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    out += csv::format_row({std::to_string(i + 1), csv::format_number(result.trace[i])});
  }
  return out;
}

std::string trace_file_name(const RunRecord& record) {
  return fmt::format("trace_{}_{}.csv", record.problem, record.result.seed);
}

std::vector<fs::path> cmd_run(const ExperimentConfig& config, std::size_t workers) {
  const Campaign campaign = run_campaign(config, workers);
  std::vector<std::pair<fs::path, std::string>> files;
  files.emplace_back(config.out_dir / "summary.csv", summary_csv(campaign.summary));
  files.emplace_back(config.out_dir / "runs.csv", runs_csv(campaign.runs));
  if (config.trace) {
    for (const auto& record : campaign.runs) {
      files.emplace_back(config.out_dir / trace_file_name(record), trace_csv(record.result));
    }
  }
  write_files_atomically(files);
  std::vector<fs::path> written;
  for (const auto& f : files) written.push_back(f.first);
  return written;
}

namespace {

struct Candidate {
  bool found = false;
  Vector position;
  double objective = std::numeric_limits<double>::infinity();
  double max_violation = 0.0;
};

}  // namespace

EngineeringReport solve_engineering(std::string_view problem_id, const ExperimentConfig& config,
                                    std::size_t workers) {
  config.validate();
  const constrained::ConstrainedProblem problem = constrained::make_problem(problem_id);
  const ObjectiveProblem objective = constrained::as_objective(problem, config.penalty);

  std::vector<Candidate> feasible(config.runs);
  std::vector<RunResult> results(config.runs);
  parallel_for(config.runs, workers, [&](std::size_t r) {
    Candidate& best = feasible[r];
    RunHooks hooks;
    hooks.on_evaluate = [&](std::span<const double> x, double) {
      Vector repaired = constrained::repair_discrete(x, problem.variable_kinds);
      if (!problem.feasible(repaired)) return;
      const double f = problem.objective(repaired);
      if (!best.found || f < best.objective) {
        best.found = true;
        best.objective = f;
        best.position = std::move(repaired);
      }
    };
    results[r] = run(objective, config.params,
                     run_seed(config.seed, problem_id, problem.dimension(), r), hooks);
  });

  EngineeringReport report;
  report.problem = problem.name;
  report.variable_names = problem.variable_names;
  report.runs = config.runs;
  for (const auto& r : results) report.evaluations += r.evaluations;

  const Candidate* chosen = nullptr;
  for (const auto& c : feasible) {
    if (c.found && (!chosen || c.objective < chosen->objective)) chosen = &c;
  }
  if (chosen) {
    report.position = chosen->position;
  } else {
    const RunResult* best = &results.front();
    for (const auto& r : results) {
      if (r.best_fitness < best->best_fitness) best = &r;
    }
    report.position = constrained::repair_discrete(best->best_position, problem.variable_kinds);
  }
  report.objective = problem.objective(report.position);
  report.max_violation = problem.max_violation(report.position);
  report.feasible = report.max_violation <= 0.0;
  report.penalized = constrained::penalize(problem, report.position, config.penalty);
  return report;
}

std::string format_report(const EngineeringReport& report) {
  std::string out = fmt::format("{}\n", report.problem);
  for (std::size_t i = 0; i < report.position.size(); ++i) {
    out += fmt::format("  {:<4} = {:.6f}\n", report.variable_names[i], report.position[i]);
  }
  out += fmt::format("  cost          = {:.4f}\n", report.objective);
  out += fmt::format("  max violation = {:.6e}\n", report.max_violation);
  out += fmt::format("  feasible      = {}\n", report.feasible ? "yes" : "no");
  out += fmt::format("  runs          = {}\n", report.runs);
  out += fmt::format("  evaluations   = {}\n", report.evaluations);
  return out;
}

std::string report_csv(const EngineeringReport& report) {
  csv::Row header = {"problem"};
  csv::Row row = {report.problem};
  for (std::size_t i = 0; i < report.position.size(); ++i) {
    header.push_back(report.variable_names[i]);
    row.push_back(csv::format_number(report.position[i]));
  }
  for (const char* name : {"cost", "max_violation", "feasible", "penalized", "runs", "evaluations"}) {
    header.emplace_back(name);
  }
  row.push_back(csv::format_number(report.objective));
  row.push_back(csv::format_number(report.max_violation));
  row.push_back(report.feasible ? "true" : "false");
  row.push_back(csv::format_number(report.penalized));
  row.push_back(std::to_string(report.runs));
  row.push_back(std::to_string(report.evaluations));
  return csv::format_row(header) + csv::format_row(row);
}

EngineeringReport cmd_engineering(std::string_view problem_id, const ExperimentConfig& config,
                                  std::size_t workers) {
  EngineeringReport report = solve_engineering(problem_id, config, workers);
  write_files_atomically(
      {{config.out_dir / fmt::format("engineering_{}.csv", problem_id), report_csv(report)}});
  return report;
}

Metric parse_metric(std::string_view text) {
  if (text == "mean") return Metric::mean;
  if (text == "best") return Metric::best;
  throw std::invalid_argument(fmt::format("unknown metric '{}' (expected mean or best)", text));
}

AlgorithmResults load_results(const fs::path& path, std::string name, Metric metric) {
  const csv::Table table = csv::read_table(path);
  const std::size_t problem_col = table.column("problem");
  const std::size_t value_col = table.column(metric == Metric::mean ? "mean" : "best");
  std::optional<std::size_t> dim_col;
  if (std::find(table.header.begin(), table.header.end(), "dimension") != table.header.end()) {
    dim_col = table.column("dimension");
  }

  std::map<std::string, std::size_t> occurrences;
  for (const auto& row : table.rows) ++occurrences[row[problem_col]];

  AlgorithmResults out;
  out.name = std::move(name);
  std::set<std::string> keys;
  for (const auto& row : table.rows) {
    std::string key = row[problem_col];
    if (occurrences[key] > 1 && dim_col) key += "@" + row[*dim_col];
    if (!keys.insert(key).second) {
      throw std::runtime_error(fmt::format("{}: duplicate row '{}'", path.string(), key));
    }
    double value = 0.0;
    const std::string& text = row[value_col];
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw std::runtime_error(fmt::format("{}: row '{}' has non-numeric value '{}'",
                                           path.string(), key, text));
    }
    out.problems.push_back(std::move(key));
    out.values.push_back(value);
  }
  return out;
}

AlgorithmResults load_results_arg(std::string_view arg, Metric metric) {
  const auto eq = arg.find('=');
  if (eq != std::string_view::npos && eq > 0) {
    return load_results(fs::path(std::string(arg.substr(eq + 1))), std::string(arg.substr(0, eq)),
                        metric);
  }
  const fs::path path{std::string(arg)};
  std::string name = path.stem().string();
  if (name == "summary" && path.has_parent_path()) {
    name = fs::absolute(path).parent_path().filename().string();
  }
  return load_results(path, name, metric);
}

WilcoxonRow compare_pair(const AlgorithmResults& a, const AlgorithmResults& b) {
  WilcoxonRow row;
  row.comparison = fmt::format("{} vs {}", a.name, b.name);
  try {
    // b - a > 0 where a reached the lower value, so T+ is a's rank sum
    const stats::WilcoxonResult w = stats::wilcoxon_signed_rank({b.values, a.values});
    row.p_value = w.p_value;
    row.t_plus = w.t_plus;
    row.t_minus = w.t_minus;
    if (w.t_plus > w.t_minus) {
      row.winner = a.name;
    } else if (w.t_minus > w.t_plus) {
      row.winner = b.name;
    } else {
      row.winner = "tie";
    }
    if (w.p_value > 0.05) row.note = "not significant";
  } catch (const stats::NoInformation&) {
    row.no_information = true;
    row.winner = "tie";
    row.note = "no information";
  }
  return row;
}

StatsReport compare(const std::vector<AlgorithmResults>& inputs, std::string reference) {
  if (inputs.size() < 2) throw std::invalid_argument("need at least two result files");
  std::set<std::string> names;
  for (const auto& in : inputs) {
    if (!names.insert(in.name).second) {
      throw std::invalid_argument(fmt::format("duplicate algorithm name '{}'", in.name));
    }
  }
  if (reference.empty()) reference = inputs.back().name;
  if (!names.contains(reference)) {
    throw std::invalid_argument(fmt::format("reference '{}' is not among the inputs", reference));
  }

  const std::set<std::string> base(inputs.front().problems.begin(), inputs.front().problems.end());
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    const std::set<std::string> other(inputs[i].problems.begin(), inputs[i].problems.end());
    std::vector<std::string> missing;
    std::vector<std::string> extra;
    std::set_difference(base.begin(), base.end(), other.begin(), other.end(),
                        std::back_inserter(missing));
    std::set_difference(other.begin(), other.end(), base.begin(), base.end(),
                        std::back_inserter(extra));
    if (!missing.empty() || !extra.empty()) {
      std::string msg = fmt::format("problem rows of '{}' differ from '{}':", inputs[i].name,
                                    inputs.front().name);
      for (const auto& m : missing) msg += fmt::format("\n  missing {}", m);
      for (const auto& e : extra) msg += fmt::format("\n  extra   {}", e);
      throw MismatchError(msg);
    }
  }

  // Align every input to the first input's row order.
  std::vector<AlgorithmResults> aligned;
  for (const auto& in : inputs) {
    std::map<std::string, double> by_key;
    for (std::size_t r = 0; r < in.problems.size(); ++r) by_key[in.problems[r]] = in.values[r];
    AlgorithmResults a{in.name, inputs.front().problems, {}};
    for (const auto& key : a.problems) a.values.push_back(by_key.at(key));
    aligned.push_back(std::move(a));
  }

  StatsReport report;
  report.matrix.problems = inputs.front().problems;
  for (const auto& a : aligned) report.matrix.algorithms.push_back(a.name);
  report.matrix.values.assign(report.matrix.problems.size(), {});
  for (std::size_t r = 0; r < report.matrix.problems.size(); ++r) {
    for (const auto& a : aligned) report.matrix.values[r].push_back(a.values[r]);
  }
  report.ranks = stats::friedman_mean_ranks(report.matrix);
  report.test = stats::friedman_statistic(report.matrix);

  const auto ref = std::find_if(aligned.begin(), aligned.end(),
                                [&](const AlgorithmResults& a) { return a.name == reference; });
  for (const auto& a : aligned) {
    if (a.name != reference) report.wilcoxon.push_back(compare_pair(a, *ref));
  }
  return report;
}

std::string friedman_csv(const StatsReport& report) {
  csv::Row header = {"row"};
  csv::Row means = {"Mean Values"};
  csv::Row ranking = {"Ranking"};
  for (std::size_t j = 0; j < report.matrix.algorithms.size(); ++j) {
    header.push_back(report.matrix.algorithms[j]);
    means.push_back(csv::format_number(report.ranks.mean_ranks[j]));
    ranking.push_back(std::to_string(report.ranks.ranking[j]));
  }
  return csv::format_row(header) + csv::format_row(means) + csv::format_row(ranking);
}

std::string friedman_test_csv(const StatsReport& report) {
  return csv::format_row({"chi_square", "p_value", "degrees_of_freedom", "problems", "algorithms"}) +
         csv::format_row({csv::format_number(report.test.chi_square),
                          csv::format_number(report.test.p_value),
                          std::to_string(report.test.degrees_of_freedom),
                          std::to_string(report.matrix.rows()),
                          std::to_string(report.matrix.columns())});
}

std::string wilcoxon_csv(const StatsReport& report) {
  std::string out =
      csv::format_row({"comparison", "p_value", "T_plus", "T_minus", "winner", "note"});
  for (const auto& w : report.wilcoxon) {
    if (w.no_information) {
      out += csv::format_row({w.comparison, "", "", "", w.winner, w.note});
      continue;
    }
    out += csv::format_row({w.comparison, csv::format_number(w.p_value),
                            csv::format_number(w.t_plus), csv::format_number(w.t_minus), w.winner,
                            w.note});
  }
  return out;
}

std::vector<fs::path> cmd_stats(const std::vector<AlgorithmResults>& inputs,
                                const std::string& reference, const fs::path& out_dir) {
  const StatsReport report = compare(inputs, reference);
  const std::vector<std::pair<fs::path, std::string>> files = {
      {out_dir / "friedman.csv", friedman_csv(report)},
      {out_dir / "friedman_test.csv", friedman_test_csv(report)},
      {out_dir / "wilcoxon.csv", wilcoxon_csv(report)},
  };
  write_files_atomically(files);
  return {files[0].first, files[1].first, files[2].first};
}

}  // namespace fwsc::harness
