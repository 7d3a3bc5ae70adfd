#include "fwsc/core.hpp"

#include <algorithm>
#include <limits>

#include <fmt/core.h>

namespace fwsc {

bool Box::contains(std::span<const double> x) const {
  if (x.size() != lower.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
  }
  return true;
}

Bounds::Bounds(Vector lower, Vector upper) : box_{std::move(lower), std::move(upper)} {
  if (box_.lower.size() != box_.upper.size()) {
    throw ContractViolation(fmt::format("bounds length mismatch: {} lower vs {} upper",
                                        box_.lower.size(), box_.upper.size()));
  }
  if (box_.lower.empty()) throw ContractViolation("bounds must have at least one dimension");
  for (std::size_t i = 0; i < box_.lower.size(); ++i) {
    if (!(box_.lower[i] < box_.upper[i])) {
      throw ContractViolation(fmt::format("degenerate bounds in dimension {}: [{}, {}]", i,
                                          box_.lower[i], box_.upper[i]));
    }
  }
}

Bounds Bounds::uniform(std::size_t dimension, double lo, double hi) {
  return Bounds(Vector(dimension, lo), Vector(dimension, hi));
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
  return mix64(mix64(seed) ^ (label * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

std::uint64_t hash_label(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  if (lo == hi) {
    engine_();  // keep the draw count independent of the interval width
    return lo;
  }
  const double x = lo + uniform() * (hi - lo);
  return std::min(x, hi);
}

std::size_t RandomStream::below(std::size_t n) {
  if (n == 0) throw ContractViolation("RandomStream::below requires n > 0");
  const std::uint64_t bound = n;
  // Rejection on the biased tail keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % bound);
}

RandomStream RandomStream::split(std::uint64_t label) const {
  return RandomStream(derive_seed(seed_, label));
}

double evaluate(const ObjectiveProblem& problem, std::span<const double> position,
                EvalContext& ctx) {
  if (position.size() != problem.dimension()) {
    throw ContractViolation(fmt::format("{}: position has {} coordinates, problem has {}",
                                        problem.name, position.size(),
                                        problem.dimension()));
  }
  if (!problem.bounds.contains(position)) {
    throw ContractViolation(fmt::format("{}: position outside bounds", problem.name));
  }
  ++ctx.evaluations;
  return problem.objective(position, ctx.noise);
}

Vector clamp_to_bounds(std::span<const double> position, const Box& box) {
  Vector out(position.begin(), position.end());
  clamp_in_place(out, box);
  return out;
}

void clamp_in_place(std::span<double> position, const Box& box) {
  if (position.size() != box.dimension()) {
    throw ContractViolation("clamp_to_bounds: length mismatch");
  }
  for (std::size_t i = 0; i < position.size(); ++i) {
    position[i] = std::clamp(position[i], box.lower[i], box.upper[i]);
  }
}

Vector uniform_in_box(RandomStream& rng, std::span<const double> lower,
                      std::span<const double> upper) {
  if (lower.size() != upper.size()) throw ContractViolation("uniform_in_box: length mismatch");
  Vector out(lower.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (lower[i] > upper[i]) throw ContractViolation("uniform_in_box: lower > upper");
    out[i] = rng.uniform(lower[i], upper[i]);
  }
  return out;
}

Box neighborhood(std::span<const double> center, double radius, const Box& outer) {
  const Vector radii(center.size(), radius);
  return neighborhood(center, radii, outer);
}

Box neighborhood(std::span<const double> center, std::span<const double> radii,
                 const Box& outer) {
  if (center.size() != radii.size() || center.size() != outer.dimension()) {
    throw ContractViolation("neighborhood: length mismatch");
  }
  Box box{Vector(center.size()), Vector(center.size())};
  for (std::size_t i = 0; i < center.size(); ++i) {
    box.lower[i] = std::max(center[i] - radii[i], outer.lower[i]);
    box.upper[i] = std::min(center[i] + radii[i], outer.upper[i]);
    // center may sit outside `outer` only through rounding; keep the box valid
    if (box.lower[i] > box.upper[i]) box.lower[i] = box.upper[i];
  }
  return box;
}

}  // namespace fwsc
