#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "fwsc/engine.hpp"
#include "oracles.hpp"

using namespace fwsc;

namespace {

ObjectiveProblem shifted_sphere(std::size_t dim, double lo, double hi) {
  return {"shifted-sphere", Bounds::uniform(dim, lo, hi),
          [](std::span<const double> x, RandomStream&) {
            double s = 0.0;
            for (double v : x) s += (v - 0.3) * (v - 0.3);
            return s;
          }};
}

std::vector<Wasp> random_wasps(RandomStream& rng, std::size_t count, std::size_t dim,
                               Sex sex, bool coarse) {
  std::vector<Wasp> out;
  for (std::size_t i = 0; i < count; ++i) {
    Wasp w;
    for (std::size_t d = 0; d < dim; ++d) w.position.push_back(rng.uniform(-10.0, 10.0));
    // coarse fitness values force ties and exact boundary hits
    w.fitness = coarse ? static_cast<double>(rng.below(5)) : rng.uniform(-1.0, 1.0);
    w.sex = sex;
    out.push_back(w);
  }
  return out;
}

}  // namespace

TEST_CASE("parameter validation names the field") {
  FwscParams p;
  CHECK_NOTHROW(p.validate());
  p.wasps_per_fig = 7;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("wasps_per_fig"), ContractViolation);
  p = FwscParams{};
  p.num_trees = 0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("num_trees"), ContractViolation);
  p = FwscParams{};
  p.wind_threshold = 1.5;
  CHECK_THROWS_AS(p.validate(), ContractViolation);
  p = FwscParams{};
  p.decay_horizon = 0.0;
  CHECK_THROWS_AS(p.validate(), ContractViolation);
}

TEST_CASE("defaults give 144 evaluations per generation") {
  const FwscParams p;
  CHECK(p.num_trees * p.figs_per_tree * p.wasps_per_fig + p.offspring_per_generation() == 144);
  CHECK(p.horizon() == doctest::Approx(0.04 * 500));
}

TEST_CASE("neighborhood width decays strictly and equals eta0 at k = K") {
  FwscParams p;
  p.decay_horizon = 7.0;
  CHECK(neighborhood_width(7.0, p) == doctest::Approx(p.eta0));
  CHECK(neighborhood_width(0.0, p) == doctest::Approx(p.eta0 * std::exp(1.0)));
  double prev = neighborhood_width(1.0, p);
  for (int k = 2; k < 60; ++k) {
    const double w = neighborhood_width(k, p);
    CHECK(w < prev);
    CHECK(w > 0.0);
    prev = w;
  }
}

TEST_CASE("radii follow the neighborhood scale") {
  const Bounds b({0.0, -10.0}, {1.0, 10.0});
  FwscParams p;
  CHECK(neighborhood_radii(b, 0.5, p) == Vector{0.5, 10.0});
  p.scale = NeighborhoodScale::absolute;
  CHECK(neighborhood_radii(b, 0.5, p) == Vector{0.5, 0.5});
}

TEST_CASE("mating grid edge cases") {
  const auto wasp = [](double f, double x) { return Wasp{{x}, f, Sex::female}; };
  const MatingGrid grid = build_mating_grid(std::vector<Wasp>{wasp(3, 30), wasp(1, 10), wasp(2, 20)});
  CHECK(grid.females[0].fitness == 1);
  CHECK(grid.females[2].fitness == 3);
  CHECK(grid.cells() == 2);
  CHECK(grid.locate(-5.0) == 0);
  CHECK(grid.locate(1.5) == 0);
  CHECK(grid.locate(2.0) == 0);  // shared boundary goes to the lower cell
  CHECK(grid.locate(2.5) == 1);
  CHECK(grid.locate(99.0) == 1);

  const std::vector<Wasp> males{{{0.0}, 2.5, Sex::male}, {{0.0}, -1.0, Sex::male}};
  const auto kids = mate(grid, males);
  CHECK(kids[0] == Vector{25.0});
  CHECK(kids[1] == Vector{15.0});

  const MatingGrid single = build_mating_grid(std::vector<Wasp>{wasp(4, 7)});
  CHECK(mate(single, males) == std::vector<Vector>{{7.0}, {7.0}});
  CHECK_THROWS_AS(build_mating_grid(std::vector<Wasp>{}), ContractViolation);
}

TEST_CASE("stable sort keeps equal-fitness females in input order") {
  const std::vector<Wasp> females{{{1.0}, 0.0, Sex::female}, {{2.0}, 0.0, Sex::female},
                                  {{3.0}, 0.0, Sex::female}};
  const MatingGrid grid = build_mating_grid(females);
  CHECK(grid.females[0].position[0] == 1.0);
  CHECK(grid.females[2].position[0] == 3.0);
  CHECK(mate(grid, std::vector<Wasp>{{{0.0}, 0.0, Sex::male}})[0] == Vector{1.5});
}

TEST_CASE("mate matches the brute-force oracle") {
  RandomStream rng(101);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t dim = 1 + rng.below(3);
    const bool coarse = trial % 2 == 0;
    const auto females = random_wasps(rng, 1 + rng.below(6), dim, Sex::female, coarse);
    const auto males = random_wasps(rng, 1 + rng.below(6), dim, Sex::male, coarse);
    REQUIRE(mate(build_mating_grid(females), males) == oracle::mate(females, males));
  }
}

TEST_CASE("select_best matches the oracle, ties to the lower index, NaN last") {
  CHECK(select_best(std::vector<double>{3, 1, 1, 0}, 3).indices == std::vector<std::size_t>{3, 1, 2});
  CHECK(select_best(std::vector<double>{NAN, 2, NAN, 5}, 3).indices ==
        std::vector<std::size_t>{1, 3, 0});
  CHECK_THROWS_AS(select_best(std::vector<double>{1.0}, 2), ContractViolation);

  RandomStream rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> f(1 + rng.below(12));
    for (double& v : f) v = rng.below(10) == 0 ? NAN : static_cast<double>(rng.below(4));
    const std::size_t count = 1 + rng.below(f.size());
    REQUIRE(select_best(f, count).indices == oracle::select(f, count));
  }
}

TEST_CASE("select_trees evaluates the pool and keeps the best members") {
  RandomStream rng(17);
  const ObjectiveProblem problem = shifted_sphere(2, -1.0, 1.0);
  FwscParams params;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vector> members;
    const std::size_t size = 1 + rng.below(10);
    for (std::size_t i = 0; i < size; ++i) {
      members.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    }
    const OffspringPool pool = pool_offsprings(members);
    const std::size_t count = 1 + rng.below(size);
    const double eta = rng.uniform(0.0, 0.5);

    Evaluator eval(problem, 1);
    const auto trees = select_trees(eval, pool, count, eta, params);
    CHECK(eval.evaluations() == size);

    std::vector<double> f;
    RandomStream unused(0);
    for (const auto& x : members) f.push_back(problem.objective(x, unused));
    const auto expected = oracle::select(f, count);
    REQUIRE(trees.size() == count);
    for (std::size_t t = 0; t < count; ++t) {
      const Vector& x = members[expected[t]];
      CHECK(trees[t].position == x);
      for (std::size_t d = 0; d < 2; ++d) {
        CHECK(trees[t].local_bounds.lower[d] == std::max(x[d] - 2.0 * eta, -1.0));
        CHECK(trees[t].local_bounds.upper[d] == std::min(x[d] + 2.0 * eta, 1.0));
      }
    }
  }
}

TEST_CASE("search directions resample inside the envelope") {
  RandomStream rng(8);
  const Bounds bounds = Bounds::uniform(3, -5.0, 5.0);
  OffspringPool pool = pool_offsprings({{0.0, 1.0, -2.0}, {1.0, 1.0, 2.0}, {0.5, 1.0, 0.0}});
  const Vector lo = pool.envelope_min;
  const Vector hi = pool.envelope_max;
  search_directions(rng, pool, bounds);
  for (const auto& x : pool.offspring) {
    CHECK(Box{lo, hi}.contains(x));
    CHECK(x[1] == 1.0);
  }
}

TEST_CASE("wind: theta 0 never blows, theta 1 perturbs exactly ceil(wf |P|)") {
  const Bounds bounds = Bounds::uniform(2, -100.0, 100.0);
  RandomStream rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vector> members;
    const std::size_t size = 1 + rng.below(60);
    for (std::size_t i = 0; i < size; ++i) members.push_back({rng.uniform(1.0, 2.0), -1.5});
    FwscParams p;
    p.wind_fraction = rng.uniform();

    OffspringPool calm = pool_offsprings(members);
    p.wind_threshold = 0.0;
    CHECK(wind_effect(rng, calm, p, bounds).empty());
    CHECK(calm.offspring == members);

    OffspringPool windy = pool_offsprings(members);
    p.wind_threshold = 1.0;
    const auto moved = wind_effect(rng, windy, p, bounds);
    const auto expected = static_cast<std::size_t>(std::ceil(p.wind_fraction * size - 1e-9));
    CHECK(moved.size() == expected);
    CHECK(std::set<std::size_t>(moved.begin(), moved.end()).size() == moved.size());
    for (std::size_t i = 0; i < size; ++i) {
      const bool was_moved = std::find(moved.begin(), moved.end(), i) != moved.end();
      if (!was_moved) CHECK(windy.offspring[i] == members[i]);
      if (was_moved) {
        // x += x u with u in [0, 1): positive coordinates grow, negative ones shrink
        CHECK(windy.offspring[i][0] >= members[i][0]);
        CHECK(windy.offspring[i][1] <= members[i][1]);
      }
    }
  }
}

TEST_CASE("the default wind fraction perturbs five of the 48 offspring") {
  std::vector<Vector> members(48, Vector{1.0});
  OffspringPool pool = pool_offsprings(members);
  FwscParams p;
  p.wind_threshold = 1.0;
  RandomStream rng(4);
  CHECK(wind_effect(rng, pool, p, Bounds::uniform(1, -10.0, 10.0)).size() == 5);
}

TEST_CASE("structural invariants over random configurations") {
  RandomStream meta(2718);
  for (int trial = 0; trial < 100; ++trial) {
    FwscParams p;
    p.num_trees = 1 + meta.below(4);
    p.figs_per_tree = 1 + meta.below(4);
    p.wasps_per_fig = 2 * (1 + meta.below(4));
    p.max_iterations = meta.below(9);
    p.wind_threshold = meta.uniform();
    p.wind_fraction = meta.uniform();
    p.eta0 = meta.uniform(0.05, 1.5);
    if (meta.below(2) == 0) p.decay_horizon = meta.uniform(0.5, 20.0);
    p.scale = meta.below(2) == 0 ? NeighborhoodScale::range : NeighborhoodScale::absolute;
    const std::size_t dim = 1 + meta.below(5);
    const double lo = meta.uniform(-50.0, 0.0);
    const ObjectiveProblem problem = shifted_sphere(dim, lo, lo + meta.uniform(0.5, 60.0));

    std::size_t out_of_bounds = 0;
    std::size_t evaluated = 0;
    std::vector<std::array<std::size_t, 4>> generations;
    RunHooks hooks;
    hooks.on_evaluate = [&](std::span<const double> x, double) {
      ++evaluated;
      if (!problem.bounds.contains(x)) ++out_of_bounds;
    };
    hooks.on_generation = [&](std::size_t t, std::size_t f, std::size_t w, std::size_t o) {
      generations.push_back({t, f, w, o});
    };
    const RunResult r = run(problem, p, meta.next_u64(), hooks);

    const std::size_t taw = p.num_trees * p.figs_per_tree * p.wasps_per_fig;
    CHECK(out_of_bounds == 0);
    CHECK(generations.size() == p.max_iterations);
    for (const auto& g : generations) {
      CHECK(g[0] == p.num_trees);
      CHECK(g[1] == p.num_trees * p.figs_per_tree);
      CHECK(g[2] == taw);
      CHECK(g[3] == taw / 2);
    }
    const std::size_t expected_evals =
        p.max_iterations == 0 ? taw : p.max_iterations * (taw + taw / 2);
    CHECK(r.evaluations == expected_evals);
    CHECK(evaluated == expected_evals);
    CHECK(r.trace.size() == p.max_iterations);
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1]);
    if (!r.trace.empty()) CHECK(r.trace.back() == r.best_fitness);
    CHECK(problem.bounds.contains(r.best_position));
  }
}

TEST_CASE("runs are deterministic per seed") {
  const ObjectiveProblem problem = shifted_sphere(4, -5.0, 5.0);
  FwscParams p;
  p.max_iterations = 20;
  const RunResult a = run(problem, p, 99);
  const RunResult b = run(problem, p, 99);
  const RunResult c = run(problem, p, 100);
  CHECK(a.trace == b.trace);
  CHECK(a.best_position == b.best_position);
  CHECK(a.trace != c.trace);
  CHECK(a.seed == 99);
}

TEST_CASE("stagnation window stops a flat run early") {
  const ObjectiveProblem flat{"flat", Bounds::uniform(2, -1.0, 1.0),
                              [](std::span<const double>, RandomStream&) { return 1.0; }};
  FwscParams p;
  p.max_iterations = 100;
  p.stagnation_window = 5;
  const RunResult r = run(flat, p, 1);
  CHECK(r.iterations_run == 6);
  CHECK(r.trace.size() == 6);
}

TEST_CASE("the default engine reaches the sphere minimum region") {
  const ObjectiveProblem problem = shifted_sphere(5, -10.0, 10.0);
  FwscParams p;
  p.max_iterations = 200;
  const RunResult r = run(problem, p, 3);
  CHECK(r.best_fitness < 1e-6);
}
