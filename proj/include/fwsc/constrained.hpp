#pragma once

// Mixed discrete/continuous engineering design problems with inequality
// constraints g_j(x) <= 0, and the static penalty that turns them into
// box-constrained objectives.

#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fwsc/core.hpp"

namespace fwsc::constrained {

struct Continuous {};

/// Values restricted to integer multiples of `step`.
struct Discrete {
  double step;
};

/// Values restricted to an explicit sorted set.
struct ValueSet {
  std::vector<double> values;
};

using VariableKind = std::variant<Continuous, Discrete, ValueSet>;

using Function = std::function<double(std::span<const double>)>;

struct ConstrainedProblem {
  std::string name;
  std::vector<std::string> variable_names;
  Bounds bounds;
  std::vector<VariableKind> variable_kinds;
  Function objective;
  std::vector<Function> constraints;

  std::size_t dimension() const { return bounds.dimension(); }
  std::vector<double> constraint_values(std::span<const double> x) const;
  /// max(0, max_j g_j(x)).
  double max_violation(std::span<const double> x) const;
  bool feasible(std::span<const double> x) const { return max_violation(x) <= 0.0; }
};

inline constexpr double kDefaultPenalty = 1e6;

/// Snaps discrete coordinates onto their lattice (ties round up) and set
/// coordinates onto the nearest member (ties to the larger member).
Vector repair_discrete(std::span<const double> position,
                       std::span<const VariableKind> kinds);

/// f(x) + coefficient * sum_j max(0, g_j(x))^2. coefficient must be positive.
double penalize(const ConstrainedProblem& problem, std::span<const double> position,
                double coefficient);

/// Box-constrained objective: repair, then penalize.
ObjectiveProblem as_objective(const ConstrainedProblem& problem,
                              double coefficient = kDefaultPenalty);

ConstrainedProblem pressure_vessel();
ConstrainedProblem stepped_beam();
ConstrainedProblem welded_beam();

/// "pressure-vessel", "stepped-beam", "welded-beam".
const std::vector<std::string>& problem_ids();
/// Throws std::invalid_argument for an unknown id.
ConstrainedProblem make_problem(std::string_view id);

}  // namespace fwsc::constrained
