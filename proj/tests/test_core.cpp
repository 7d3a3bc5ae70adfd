#include <doctest.h>

#include <cmath>
#include <set>

#include "fwsc/core.hpp"

using namespace fwsc;

TEST_CASE("bounds reject malformed boxes") {
  CHECK_THROWS_AS(Bounds({0.0, 0.0}, {1.0}), ContractViolation);
  CHECK_THROWS_AS(Bounds({}, {}), ContractViolation);
  CHECK_THROWS_AS(Bounds({1.0}, {1.0}), ContractViolation);
  CHECK_THROWS_AS(Bounds({2.0}, {1.0}), ContractViolation);

  const Bounds b = Bounds::uniform(3, -5.0, 5.0);
  CHECK(b.dimension() == 3);
  CHECK(b.contains(std::vector<double>{-5.0, 0.0, 5.0}));
  CHECK_FALSE(b.contains(std::vector<double>{-5.0, 0.0, 5.0000001}));
  CHECK_FALSE(b.contains(std::vector<double>{0.0, 0.0}));
  CHECK_FALSE(b.contains(std::vector<double>{NAN, 0.0, 0.0}));
}

TEST_CASE("seed mixing matches published splitmix64 and FNV-1a vectors") {
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(hash_label("") == 0xcbf29ce484222325ULL);
  CHECK(hash_label("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(derive_seed(7, 1) != derive_seed(7, 2));
  CHECK(derive_seed(7, 1) != derive_seed(8, 1));
}

TEST_CASE("random stream is reproducible and seed dependent") {
  RandomStream a(42);
  RandomStream b(42);
  RandomStream c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs = differs || x != c.next_u64();
  }
  CHECK(differs);
  CHECK(RandomStream(5).split(3).next_u64() == RandomStream(5).split(3).next_u64());
  CHECK(RandomStream(5).split(3).next_u64() != RandomStream(5).split(4).next_u64());
}

TEST_CASE("uniform draws lie in [0, 1) with mean one half") {
  RandomStream rng(2024);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // standard error is 1/sqrt(12 n) ~ 6.5e-4
  CHECK(std::abs(sum / n - 0.5) < 4e-3);
}

TEST_CASE("interval draws stay inside and a degenerate interval still consumes a draw") {
  RandomStream rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-3.0, 7.0);
    CHECK(x >= -3.0);
    CHECK(x <= 7.0);
  }
  RandomStream p(11);
  RandomStream q(11);
  CHECK(p.uniform(2.5, 2.5) == 2.5);
  q.next_u64();
  CHECK(p.next_u64() == q.next_u64());
}

TEST_CASE("bounded integers cover the range evenly") {
  RandomStream rng(3);
  std::vector<int> counts(6, 0);
  for (int i = 0; i < 60000; ++i) ++counts[rng.below(6)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  CHECK_THROWS_AS(rng.below(0), ContractViolation);
  CHECK(rng.below(1) == 0);
}

TEST_CASE("evaluate counts calls and guards its preconditions") {
  const ObjectiveProblem sphere{
      "sphere", Bounds::uniform(2, -1.0, 1.0), [](std::span<const double> x, RandomStream&) {
        return x[0] * x[0] + x[1] * x[1];
      }};
  EvalContext ctx(1);
  CHECK(evaluate(sphere, std::vector<double>{0.5, -0.5}, ctx) == doctest::Approx(0.5));
  CHECK(ctx.evaluations == 1);
  CHECK_THROWS_AS(evaluate(sphere, std::vector<double>{0.5}, ctx), ContractViolation);
  CHECK_THROWS_AS(evaluate(sphere, std::vector<double>{1.5, 0.0}, ctx), ContractViolation);
  CHECK(ctx.evaluations == 1);
}

TEST_CASE("clamp and neighborhood stay inside the outer box") {
  const Box outer{{-1.0, 0.0}, {1.0, 10.0}};
  CHECK(clamp_to_bounds(std::vector<double>{-3.0, 4.0}, outer) == Vector{-1.0, 4.0});
  CHECK_THROWS_AS(clamp_to_bounds(std::vector<double>{0.0}, outer), ContractViolation);

  const Box n = neighborhood(std::vector<double>{0.9, 5.0}, 0.5, outer);
  CHECK(n.lower == Vector{0.4, 4.5});
  CHECK(n.upper == Vector{1.0, 5.5});

  const Box zero = neighborhood(std::vector<double>{0.25, 3.0}, 0.0, outer);
  CHECK(zero.lower == zero.upper);
  CHECK(zero.contains(std::vector<double>{0.25, 3.0}));

  const Box per_dim = neighborhood(std::vector<double>{0.0, 5.0}, std::vector<double>{0.1, 2.0}, outer);
  CHECK(per_dim.lower[0] == doctest::Approx(-0.1));
  CHECK(per_dim.upper[1] == doctest::Approx(7.0));
}

TEST_CASE("uniform_in_box respects each coordinate") {
  RandomStream rng(77);
  const Vector lo{-1.0, 5.0, 2.0};
  const Vector hi{1.0, 6.0, 2.0};
  for (int i = 0; i < 200; ++i) {
    const Vector x = uniform_in_box(rng, lo, hi);
    CHECK(Box{lo, hi}.contains(x));
    CHECK(x[2] == 2.0);
  }
  CHECK_THROWS_AS(uniform_in_box(rng, hi, lo), ContractViolation);
}
