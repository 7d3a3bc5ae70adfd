#pragma once

// Fig tree / wasp coevolutionary search.
//
// One generation: every tree spawns figs in its neighborhood, every fig
// spawns wasps which are evaluated and split into females and males. Each
// male is bracketed by two consecutive females in fitness order and their
// midpoint becomes an offspring. All offspring are pooled, resampled inside
// the pool's per-dimension envelope, a fraction is scattered by the wind,
// and the best T offspring become the next generation's trees.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fwsc/core.hpp"

namespace fwsc {

/// Units of the neighborhood radius: a fraction of each dimension's range
/// (upper - lower), or raw problem units.
enum class NeighborhoodScale { range, absolute };

struct FwscParams {
  std::size_t num_trees = 3;       // T
  std::size_t figs_per_tree = 4;   // A
  std::size_t wasps_per_fig = 8;   // W, even
  double eta0 = 0.8;               // neighborhood constant
  double wind_threshold = 0.5;     // theta: wind blows when u < theta
  /// Decay horizon of the neighborhood. Unset means decay_ratio * max_iterations.
  std::optional<double> decay_horizon;
  double decay_ratio = 0.04;
  NeighborhoodScale scale = NeighborhoodScale::range;
  std::size_t max_iterations = 500;
  double wind_fraction = 0.10;
  std::optional<std::size_t> stagnation_window;

  /// Effective K.
  double horizon() const;
  std::size_t offspring_per_generation() const {
    return num_trees * figs_per_tree * (wasps_per_fig / 2);
  }
  /// Throws ContractViolation naming the offending field.
  void validate() const;
};

enum class Sex { female, male };

struct Wasp {
  Vector position;
  double fitness = 0.0;
  Sex sex = Sex::female;
};

struct Tree {
  Vector position;
  Box local_bounds;
};

struct Fig {
  Vector position;
  Box local_bounds;
  std::vector<Wasp> wasps;
};

/// Females in ascending fitness order (stable on ties). Cell r is the closed
/// interval [females[r].fitness, females[r+1].fitness].
struct MatingGrid {
  std::vector<Wasp> females;

  std::size_t cells() const { return females.size() < 2 ? 1 : females.size() - 1; }
  /// Index r of the cell used for a male with the given fitness. Fitness below
  /// the first female maps to the first cell, above the last to the last cell.
  std::size_t locate(double male_fitness) const;
};

struct OffspringPool {
  std::vector<Vector> offspring;
  Vector envelope_min;
  Vector envelope_max;

  std::size_t size() const { return offspring.size(); }
  void recompute_envelope();
};

struct RunResult {
  Vector best_position;
  double best_fitness = 0.0;
  std::vector<double> trace;  // best-so-far after each generation
  std::uint64_t evaluations = 0;
  std::uint64_t seed = 0;
  std::size_t iterations_run = 0;
};

/// Evaluation gateway used by one run. Counts evaluations, keeps the
/// best-so-far point and forwards every evaluated position to an optional
/// observer.
class Evaluator {
public:
  using Observer = std::function<void(std::span<const double>, double)>;

  Evaluator(const ObjectiveProblem& problem, std::uint64_t noise_seed,
            Observer observer = {});

  double operator()(std::span<const double> position);

  const ObjectiveProblem& problem() const { return *problem_; }
  std::uint64_t evaluations() const { return ctx_.evaluations; }
  bool has_best() const { return has_best_; }
  double best_fitness() const { return best_fitness_; }
  const Vector& best_position() const { return best_position_; }

private:
  const ObjectiveProblem* problem_;
  EvalContext ctx_;
  Observer observer_;
  bool has_best_ = false;
  double best_fitness_ = 0.0;
  Vector best_position_;
};

/// eta0 * exp(1 - k / K).
double neighborhood_width(double k, const FwscParams& params);

/// Per-dimension radius for width `eta` under params.scale.
Vector neighborhood_radii(const Bounds& bounds, double eta, const FwscParams& params);

std::vector<Tree> spawn_trees(RandomStream& rng, const ObjectiveProblem& problem,
                              const FwscParams& params, double eta);

std::vector<Fig> spawn_figs(RandomStream& rng, const ObjectiveProblem& problem,
                            const Tree& tree, const FwscParams& params, double eta);

/// Fills fig.wasps: W evaluated wasps, W/2 of each sex by random partition.
void spawn_wasps(RandomStream& rng, Evaluator& eval, Fig& fig, const FwscParams& params);

MatingGrid build_mating_grid(std::span<const Wasp> females);

/// One offspring per male: midpoint of the two females bracketing its fitness.
std::vector<Vector> mate(const MatingGrid& grid, std::span<const Wasp> males);

/// Mates the wasps of one fig (females and males in wasp order).
std::vector<Vector> mate_fig(const Fig& fig);

OffspringPool pool_offsprings(std::vector<Vector> offspring);

/// Redraws every coordinate uniformly inside the pool envelope.
void search_directions(RandomStream& rng, OffspringPool& pool, const Bounds& bounds);

/// Draws the wind gate; when it fires, ceil(wind_fraction * |pool|) distinct
/// members get x += x * u per coordinate. Returns the perturbed indices.
std::vector<std::size_t> wind_effect(RandomStream& rng, OffspringPool& pool,
                                     const FwscParams& params, const Bounds& bounds);

struct Selection {
  std::vector<std::size_t> indices;  // into the pool, best first
  std::vector<double> fitness;
};

/// Indices of the `count` smallest fitness values, ties to the lower index.
Selection select_best(std::span<const double> fitness, std::size_t count);

/// Evaluates the pool and turns its best `count` members into trees whose
/// neighborhoods use radius `eta`.
std::vector<Tree> select_trees(Evaluator& eval, const OffspringPool& pool, std::size_t count,
                               double eta, const FwscParams& params);

struct RunHooks {
  Evaluator::Observer on_evaluate;
  /// Called once per generation with the trees, figs and pool sizes.
  std::function<void(std::size_t trees, std::size_t figs, std::size_t wasps,
                     std::size_t offspring)>
      on_generation;
};

RunResult run(const ObjectiveProblem& problem, const FwscParams& params, std::uint64_t seed,
              const RunHooks& hooks = {});

}  // namespace fwsc
