#include "fwsc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

namespace fwsc {

namespace {

constexpr std::uint64_t kSearchStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

// Uniform point in `box`, shifted by an independent draw on [-r_i, r_i] per
// coordinate and clamped to the global bounds.
Vector jittered_point(RandomStream& rng, const Box& box, std::span<const double> radii,
                      const Box& global) {
  Vector x = uniform_in_box(rng, box.lower, box.upper);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += rng.uniform(-radii[i], radii[i]);
  clamp_in_place(x, global);
  return x;
}

void partial_shuffle(RandomStream& rng, std::vector<std::size_t>& items, std::size_t count) {
  for (std::size_t i = 0; i < count && i + 1 < items.size(); ++i) {
    const std::size_t j = i + rng.below(items.size() - i);
    std::swap(items[i], items[j]);
  }
}

}  // namespace

double FwscParams::horizon() const {
  if (decay_horizon) return *decay_horizon;
  return decay_ratio * static_cast<double>(std::max<std::size_t>(max_iterations, 1));
}

void FwscParams::validate() const {
  if (num_trees == 0) throw ContractViolation("num_trees must be positive");
  if (figs_per_tree == 0) throw ContractViolation("figs_per_tree must be positive");
  if (wasps_per_fig < 2 || wasps_per_fig % 2 != 0) {
    throw ContractViolation(
        fmt::format("wasps_per_fig must be even and at least 2 (got {})", wasps_per_fig));
  }
  if (offspring_per_generation() < num_trees) {
    throw ContractViolation("num_trees exceeds the offspring produced per generation");
  }
  if (!(eta0 > 0.0)) throw ContractViolation("eta0 must be positive");
  if (!(wind_threshold >= 0.0 && wind_threshold <= 1.0)) {
    throw ContractViolation("wind_threshold must lie in [0, 1]");
  }
  if (!(wind_fraction >= 0.0 && wind_fraction <= 1.0)) {
    throw ContractViolation("wind_fraction must lie in [0, 1]");
  }
  if (!(horizon() > 0.0) || !std::isfinite(horizon())) {
    throw ContractViolation("decay horizon K must be positive and finite");
  }
  if (stagnation_window && *stagnation_window == 0) {
    throw ContractViolation("stagnation_window must be positive when set");
  }
}

std::size_t MatingGrid::locate(double male_fitness) const {
  if (females.size() < 2) return 0;
  const std::size_t last = females.size() - 2;
  if (male_fitness < females.front().fitness) return 0;
  for (std::size_t r = 0; r <= last; ++r) {
    if (females[r].fitness <= male_fitness && male_fitness <= females[r + 1].fitness) return r;
  }
  return last;
}

void OffspringPool::recompute_envelope() {
  if (offspring.empty()) {
    envelope_min.clear();
    envelope_max.clear();
    return;
  }
  envelope_min = offspring.front();
  envelope_max = offspring.front();
  for (const auto& x : offspring) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      envelope_min[i] = std::min(envelope_min[i], x[i]);
      envelope_max[i] = std::max(envelope_max[i], x[i]);
    }
  }
}

Evaluator::Evaluator(const ObjectiveProblem& problem, std::uint64_t noise_seed,
                     Observer observer)
    : problem_(&problem), ctx_(noise_seed), observer_(std::move(observer)) {}

double Evaluator::operator()(std::span<const double> position) {
  const double f = evaluate(*problem_, position, ctx_);
  if (observer_) observer_(position, f);
  if (!has_best_ || f < best_fitness_) {
    has_best_ = true;
    best_fitness_ = f;
    best_position_.assign(position.begin(), position.end());
  }
  return f;
}

double neighborhood_width(double k, const FwscParams& params) {
  return params.eta0 * std::exp(1.0 - k / params.horizon());
}

Vector neighborhood_radii(const Bounds& bounds, double eta, const FwscParams& params) {
  Vector radii(bounds.dimension(), eta);
  if (params.scale == NeighborhoodScale::range) {
    for (std::size_t i = 0; i < radii.size(); ++i) {
      radii[i] = eta * (bounds.upper()[i] - bounds.lower()[i]);
    }
  }
  return radii;
}

std::vector<Tree> spawn_trees(RandomStream& rng, const ObjectiveProblem& problem,
                              const FwscParams& params, double eta) {
  const Box& global = problem.bounds.box();
  const Vector radii = neighborhood_radii(problem.bounds, eta, params);
  std::vector<Tree> trees;
  trees.reserve(params.num_trees);
  for (std::size_t t = 0; t < params.num_trees; ++t) {
    Vector x = jittered_point(rng, global, radii, global);
    Box local = neighborhood(x, radii, global);
    trees.push_back(Tree{std::move(x), std::move(local)});
  }
  return trees;
}

std::vector<Fig> spawn_figs(RandomStream& rng, const ObjectiveProblem& problem,
                            const Tree& tree, const FwscParams& params, double eta) {
  const Box& global = problem.bounds.box();
  const Vector radii = neighborhood_radii(problem.bounds, eta, params);
  std::vector<Fig> figs;
  figs.reserve(params.figs_per_tree);
  for (std::size_t a = 0; a < params.figs_per_tree; ++a) {
    Vector x = jittered_point(rng, tree.local_bounds, radii, global);
    Box local = neighborhood(x, radii, global);
    figs.push_back(Fig{std::move(x), std::move(local), {}});
  }
  return figs;
}

void spawn_wasps(RandomStream& rng, Evaluator& eval, Fig& fig, const FwscParams& params) {
  const std::size_t w = params.wasps_per_fig;
  fig.wasps.clear();
  fig.wasps.reserve(w);
  for (std::size_t i = 0; i < w; ++i) {
    Wasp wasp;
    wasp.position = uniform_in_box(rng, fig.local_bounds.lower, fig.local_bounds.upper);
    wasp.fitness = eval(wasp.position);
    fig.wasps.push_back(std::move(wasp));
  }
  // A random half of the wasps are female.
  std::vector<std::size_t> order(w);
  std::iota(order.begin(), order.end(), std::size_t{0});
  partial_shuffle(rng, order, w / 2);
  for (auto& wasp : fig.wasps) wasp.sex = Sex::male;
  for (std::size_t i = 0; i < w / 2; ++i) fig.wasps[order[i]].sex = Sex::female;
}

MatingGrid build_mating_grid(std::span<const Wasp> females) {
  if (females.empty()) throw ContractViolation("mating grid needs at least one female");
  MatingGrid grid{std::vector<Wasp>(females.begin(), females.end())};
  std::stable_sort(grid.females.begin(), grid.females.end(),
                   [](const Wasp& a, const Wasp& b) { return a.fitness < b.fitness; });
  return grid;
}

std::vector<Vector> mate(const MatingGrid& grid, std::span<const Wasp> males) {
  if (grid.females.empty()) throw ContractViolation("mate: empty grid");
  std::vector<Vector> offspring;
  offspring.reserve(males.size());
  for (const Wasp& male : males) {
    if (grid.females.size() == 1) {
      offspring.push_back(grid.females.front().position);
      continue;
    }
    const std::size_t r = grid.locate(male.fitness);
    const Vector& lo = grid.females[r].position;
    const Vector& hi = grid.females[r + 1].position;
    Vector child(lo.size());
    for (std::size_t i = 0; i < child.size(); ++i) child[i] = 0.5 * (lo[i] + hi[i]);
    offspring.push_back(std::move(child));
  }
  return offspring;
}

std::vector<Vector> mate_fig(const Fig& fig) {
  std::vector<Wasp> females;
  std::vector<Wasp> males;
  for (const Wasp& w : fig.wasps) (w.sex == Sex::female ? females : males).push_back(w);
  return mate(build_mating_grid(females), males);
}

OffspringPool pool_offsprings(std::vector<Vector> offspring) {
  if (offspring.empty()) throw ContractViolation("offspring pool must not be empty");
  OffspringPool pool{std::move(offspring), {}, {}};
  pool.recompute_envelope();
  return pool;
}

void search_directions(RandomStream& rng, OffspringPool& pool, const Bounds& bounds) {
  if (pool.offspring.empty()) throw ContractViolation("search_directions: empty pool");
  for (Vector& x : pool.offspring) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.uniform(pool.envelope_min[i], pool.envelope_max[i]);
    }
    clamp_in_place(x, bounds.box());
  }
  pool.recompute_envelope();
}

std::vector<std::size_t> wind_effect(RandomStream& rng, OffspringPool& pool,
                                     const FwscParams& params, const Bounds& bounds) {
  if (pool.offspring.empty()) throw ContractViolation("wind_effect: empty pool");
  const double gate = rng.uniform();
  if (!(gate < params.wind_threshold)) return {};

  const double share = params.wind_fraction * static_cast<double>(pool.size());
  // 1e-9 absorbs representation error such as 0.1 * 50 = 5.000000000000001
  const auto count = std::min(pool.size(), static_cast<std::size_t>(std::ceil(share - 1e-9)));

  std::vector<std::size_t> members(pool.size());
  std::iota(members.begin(), members.end(), std::size_t{0});
  partial_shuffle(rng, members, count);
  members.resize(count);

  for (std::size_t m : members) {
    Vector& x = pool.offspring[m];
    for (double& xi : x) xi += xi * rng.uniform();
    clamp_in_place(x, bounds.box());
  }
  pool.recompute_envelope();
  return members;
}

Selection select_best(std::span<const double> fitness, std::size_t count) {
  if (count > fitness.size()) {
    throw ContractViolation(
        fmt::format("cannot select {} members from a pool of {}", count, fitness.size()));
  }
  std::vector<std::size_t> order(fitness.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // NaN sorts last so a broken evaluation never displaces a real candidate.
  const auto less = [&](std::size_t a, std::size_t b) {
    const double fa = fitness[a];
    const double fb = fitness[b];
    if (std::isnan(fa) || std::isnan(fb)) return !std::isnan(fa) && std::isnan(fb);
    return fa < fb;
  };
  std::stable_sort(order.begin(), order.end(), less);
  Selection sel;
  sel.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
  for (std::size_t i : sel.indices) sel.fitness.push_back(fitness[i]);
  return sel;
}

std::vector<Tree> select_trees(Evaluator& eval, const OffspringPool& pool, std::size_t count,
                               double eta, const FwscParams& params) {
  std::vector<double> fitness;
  fitness.reserve(pool.size());
  for (const Vector& x : pool.offspring) fitness.push_back(eval(x));
  const Selection sel = select_best(fitness, count);
  const Box& global = eval.problem().bounds.box();
  const Vector radii = neighborhood_radii(eval.problem().bounds, eta, params);
  std::vector<Tree> trees;
  trees.reserve(count);
  for (std::size_t i : sel.indices) {
    const Vector& x = pool.offspring[i];
    trees.push_back(Tree{x, neighborhood(x, radii, global)});
  }
  return trees;
}

RunResult run(const ObjectiveProblem& problem, const FwscParams& params, std::uint64_t seed,
              const RunHooks& hooks) {
  params.validate();
  RandomStream rng = RandomStream(seed).split(kSearchStream);
  Evaluator eval(problem, derive_seed(seed, kNoiseStream), hooks.on_evaluate);

  double k = 1.0;
  double eta = neighborhood_width(k, params);
  std::vector<Tree> trees = spawn_trees(rng, problem, params, eta);

  RunResult result;
  result.seed = seed;

  const auto grow_figs = [&] {
    std::vector<Fig> figs;
    figs.reserve(trees.size() * params.figs_per_tree);
    for (const Tree& tree : trees) {
      for (Fig& fig : spawn_figs(rng, problem, tree, params, eta)) {
        spawn_wasps(rng, eval, fig, params);
        figs.push_back(std::move(fig));
      }
    }
    return figs;
  };

  if (params.max_iterations == 0) {
    grow_figs();
  }

  std::size_t stale = 0;
  for (std::size_t gen = 0; gen < params.max_iterations; ++gen) {
    std::vector<Fig> figs = grow_figs();

    std::vector<Vector> children;
    children.reserve(params.offspring_per_generation());
    for (const Fig& fig : figs) {
      for (Vector& child : mate_fig(fig)) children.push_back(std::move(child));
    }
    OffspringPool pool = pool_offsprings(std::move(children));
    if (hooks.on_generation) {
      hooks.on_generation(trees.size(), figs.size(), figs.size() * params.wasps_per_fig,
                          pool.size());
    }

    search_directions(rng, pool, problem.bounds);
    wind_effect(rng, pool, params, problem.bounds);

    const double previous_best = result.trace.empty() ? 0.0 : result.trace.back();
    k += 1.0;
    eta = neighborhood_width(k, params);
    trees = select_trees(eval, pool, params.num_trees, eta, params);

    result.trace.push_back(eval.best_fitness());
    ++result.iterations_run;

    if (params.stagnation_window) {
      stale = (result.trace.size() > 1 && !(eval.best_fitness() < previous_best)) ? stale + 1 : 0;
      if (stale >= *params.stagnation_window) break;
    }
  }

  result.best_fitness = eval.best_fitness();
  result.best_position = eval.best_position();
  result.evaluations = eval.evaluations();
  return result;
}

}  // namespace fwsc
