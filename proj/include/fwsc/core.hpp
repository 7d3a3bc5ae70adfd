#pragma once

// Problem model, box arithmetic and the seeded random stream shared by the
// optimizer, the benchmark suite and the experiment harness.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fwsc {

using Vector = std::vector<double>;

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Axis-aligned box with lower[i] <= upper[i]. Zero-width dimensions are
/// allowed; neighborhoods shrink toward a point as the radius decays.
struct Box {
  Vector lower;
  Vector upper;

  std::size_t dimension() const { return lower.size(); }
  bool contains(std::span<const double> x) const;
};

/// Global search domain of a problem. Every dimension must have
/// lower < upper; degenerate dimensions are rejected.
class Bounds {
public:
  Bounds(Vector lower, Vector upper);

  /// Same interval [lo, hi] in every one of `dimension` coordinates.
  static Bounds uniform(std::size_t dimension, double lo, double hi);

  std::size_t dimension() const { return box_.dimension(); }
  const Vector& lower() const { return box_.lower; }
  const Vector& upper() const { return box_.upper; }
  const Box& box() const { return box_; }
  bool contains(std::span<const double> x) const { return box_.contains(x); }

private:
  Box box_;
};

/// Deterministic 64-bit generator. Streams are derived from a seed and an
/// arbitrary number of integer labels, so independent runs never share state.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  /// Uniform on [lo, hi]; returns lo exactly when lo == hi.
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);

  /// Child stream keyed by `label`; the parent is not advanced.
  RandomStream split(std::uint64_t label) const;

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used for seed derivation.
std::uint64_t mix64(std::uint64_t x);
/// Combines a seed with a label into a new well-mixed seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label);
/// FNV-1a of a string, for keying seeds by problem id.
std::uint64_t hash_label(std::string_view text);

/// Objective callback. The stream is only touched by stochastic objectives.
using Objective = std::function<double(std::span<const double>, RandomStream&)>;

struct ObjectiveProblem {
  std::string name;
  Bounds bounds;
  Objective objective;

  std::size_t dimension() const { return bounds.dimension(); }
};

/// Per-run evaluation state: the noise stream handed to the objective and
/// the evaluation counter.
struct EvalContext {
  explicit EvalContext(std::uint64_t noise_seed) : noise(noise_seed) {}

  RandomStream noise;
  std::uint64_t evaluations = 0;
};

/// Evaluates f(position). Throws ContractViolation on a dimension mismatch or
/// a position outside the problem bounds.
double evaluate(const ObjectiveProblem& problem, std::span<const double> position,
                EvalContext& ctx);

/// Projects every coordinate onto [lower[i], upper[i]].
Vector clamp_to_bounds(std::span<const double> position, const Box& box);
void clamp_in_place(std::span<double> position, const Box& box);

/// One independent uniform draw per coordinate on [lower[i], upper[i]].
Vector uniform_in_box(RandomStream& rng, std::span<const double> lower,
                      std::span<const double> upper);

/// [center - radius, center + radius] intersected with `outer`.
Box neighborhood(std::span<const double> center, double radius, const Box& outer);
/// Same with a separate radius per dimension.
Box neighborhood(std::span<const double> center, std::span<const double> radii,
                 const Box& outer);

}  // namespace fwsc
