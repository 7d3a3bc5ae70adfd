#include "fwsc/constrained.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/core.h>

namespace fwsc::constrained {

namespace {

using Span = std::span<const double>;

double round_half_up(double v) { return std::floor(v + 0.5); }

struct Snap {
  double operator()(Continuous, double x) const { return x; }
  double operator()(const Discrete& d, double x) const {
    return round_half_up(x / d.step) * d.step;
  }
  double operator()(const ValueSet& s, double x) const {
    double best = s.values.front();
    for (double v : s.values) {
      const double dv = std::abs(v - x);
      const double db = std::abs(best - x);
      if (dv < db || (dv == db && v > best)) best = v;
    }
    return best;
  }
};

// Sandgren's pressure vessel: shell thickness Ts, head thickness Th, inner
// radius R, shell length L. Thicknesses come in multiples of 1/16 inch.
ConstrainedProblem build_pressure_vessel() {
  constexpr double pi = std::numbers::pi;
  ConstrainedProblem p{
      "pressure-vessel",
      {"T_s", "T_h", "R", "L"},
      Bounds({0.0625, 0.0625, 10.0, 10.0}, {99 * 0.0625, 99 * 0.0625, 200.0, 200.0}),
      {Discrete{0.0625}, Discrete{0.0625}, Continuous{}, Continuous{}},
      [](Span x) {
        const double ts = x[0], th = x[1], r = x[2], l = x[3];
        return 0.6224 * ts * r * l + 1.7781 * th * r * r + 3.1661 * ts * ts * l +
               19.84 * ts * ts * r;
      },
      {},
  };
  p.constraints = {
      [](Span x) { return -x[0] + 0.0193 * x[2]; },
      [](Span x) { return -x[1] + 0.00954 * x[2]; },
      [pi](Span x) {
        const double r = x[2], l = x[3];
        return -pi * r * r * l - (4.0 / 3.0) * pi * r * r * r + 1296000.0;
      },
      [](Span x) { return x[3] - 240.0; },
  };
  return p;
}

// Thanedar & Vanderplaats' five-segment cantilever, tip load P, segment
// length 100 cm. Variables alternate width b_i and height h_i from the
// clamped end outward.
ConstrainedProblem build_stepped_beam() {
  constexpr double load = 50000.0;
  constexpr double segment = 100.0;
  constexpr double modulus = 2.0e7;
  constexpr double allowable_stress = 14000.0;
  constexpr double max_deflection = 2.7;
  constexpr double max_aspect = 20.0;

  std::vector<double> h1_values;
  for (int h = 30; h <= 65; ++h) h1_values.push_back(h);
  const ValueSet narrow{{2.4, 2.6, 2.8, 3.1}};
  const ValueSet tall{{45.0, 50.0, 55.0, 60.0}};

  ConstrainedProblem p{
      "stepped-beam",
      {"b1", "h1", "b2", "h2", "b3", "h3", "b4", "h4", "b5", "h5"},
      Bounds({1.0, 30.0, 2.4, 45.0, 2.4, 45.0, 1.0, 30.0, 1.0, 30.0},
             {5.0, 65.0, 3.1, 60.0, 3.1, 60.0, 5.0, 65.0, 5.0, 65.0}),
      {Discrete{1.0}, ValueSet{h1_values}, narrow, tall, narrow, tall, Continuous{},
       Continuous{}, Continuous{}, Continuous{}},
      [](Span x) {
        double v = 0.0;
        for (std::size_t i = 0; i < 5; ++i) v += x[2 * i] * x[2 * i + 1] * segment;
        return v;
      },
      {},
  };
  for (std::size_t i = 0; i < 5; ++i) {
    const double arm = static_cast<double>(5 - i) * segment;
    p.constraints.push_back([i, arm](Span x) {
      const double b = x[2 * i], h = x[2 * i + 1];
      return 6.0 * load * arm / (b * h * h) - allowable_stress;
    });
  }
  for (std::size_t i = 0; i < 5; ++i) {
    p.constraints.push_back([i](Span x) { return x[2 * i + 1] / x[2 * i] - max_aspect; });
  }
  p.constraints.push_back([](Span x) {
    // Tip deflection by moment-area: segment i (from the clamp) contributes
    // ((6-i)^3 - (5-i)^3) / I_i.
    static constexpr double weight[5] = {61.0, 37.0, 19.0, 7.0, 1.0};
    double s = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      const double b = x[2 * i], h = x[2 * i + 1];
      s += weight[i] / (b * h * h * h / 12.0);
    }
    return load * segment * segment * segment / (3.0 * modulus) * s - max_deflection;
  });
  return p;
}

// Welded beam after Coello: weld height h, weld length l, bar height t,
// bar thickness b.
ConstrainedProblem build_welded_beam() {
  constexpr double load = 6000.0;
  constexpr double length = 14.0;
  constexpr double modulus = 30e6;
  constexpr double shear_modulus = 12e6;
  constexpr double max_shear = 13600.0;
  constexpr double max_stress = 30000.0;
  constexpr double max_deflection = 0.25;

  ConstrainedProblem p{
      "welded-beam",
      {"h", "l", "t", "b"},
      Bounds({0.1, 0.1, 0.1, 0.1}, {2.0, 10.0, 10.0, 2.0}),
      {Continuous{}, Continuous{}, Continuous{}, Continuous{}},
      [](Span x) {
        const double h = x[0], l = x[1], t = x[2], b = x[3];
        return 1.10471 * h * h * l + 0.04811 * t * b * (14.0 + l);
      },
      {},
  };
  p.constraints = {
      [](Span x) {
        const double h = x[0], l = x[1], t = x[2];
        const double primary = load / (std::sqrt(2.0) * h * l);
        const double moment = load * (length + l / 2.0);
        const double half = (h + t) / 2.0;
        const double radius = std::sqrt(l * l / 4.0 + half * half);
        const double polar = 2.0 * (std::sqrt(2.0) * h * l * (l * l / 12.0 + half * half));
        const double secondary = moment * radius / polar;
        const double tau = std::sqrt(primary * primary +
                                     2.0 * primary * secondary * l / (2.0 * radius) +
                                     secondary * secondary);
        return tau - max_shear;
      },
      [](Span x) { return 6.0 * load * length / (x[3] * x[2] * x[2]) - max_stress; },
      [](Span x) { return x[0] - x[3]; },
      [](Span x) {
        return 0.10471 * x[0] * x[0] + 0.04811 * x[2] * x[3] * (14.0 + x[1]) - 5.0;
      },
      [](Span x) { return 0.125 - x[0]; },
      [](Span x) {
        const double t = x[2], b = x[3];
        return 4.0 * load * length * length * length / (modulus * t * t * t * b) -
               max_deflection;
      },
      [](Span x) {
        const double t = x[2], b = x[3];
        const double critical =
            4.013 * modulus * std::sqrt(t * t * std::pow(b, 6) / 36.0) / (length * length) *
            (1.0 - t / (2.0 * length) * std::sqrt(modulus / (4.0 * shear_modulus)));
        return load - critical;
      },
  };
  return p;
}

}  // namespace

std::vector<double> ConstrainedProblem::constraint_values(Span x) const {
  std::vector<double> g;
  g.reserve(constraints.size());
  for (const auto& c : constraints) g.push_back(c(x));
  return g;
}

double ConstrainedProblem::max_violation(Span x) const {
  double worst = 0.0;
  for (const auto& c : constraints) worst = std::max(worst, c(x));
  return worst;
}

Vector repair_discrete(Span position, std::span<const VariableKind> kinds) {
  if (position.size() != kinds.size()) {
    throw ContractViolation("repair_discrete: length mismatch");
  }
  Vector out(position.begin(), position.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::visit([&](const auto& kind) { return Snap{}(kind, out[i]); }, kinds[i]);
  }
  return out;
}

double penalize(const ConstrainedProblem& problem, Span position, double coefficient) {
  if (!(coefficient > 0.0)) throw ContractViolation("penalty coefficient must be positive");
  double violation = 0.0;
  for (const auto& c : problem.constraints) {
    const double v = std::max(0.0, c(position));
    violation += v * v;
  }
  return problem.objective(position) + coefficient * violation;
}

ObjectiveProblem as_objective(const ConstrainedProblem& problem, double coefficient) {
  if (!(coefficient > 0.0)) throw ContractViolation("penalty coefficient must be positive");
  return ObjectiveProblem{
      problem.name, problem.bounds,
      [problem, coefficient](Span x, RandomStream&) {
        const Vector repaired = repair_discrete(x, problem.variable_kinds);
        return penalize(problem, repaired, coefficient);
      }};
}

ConstrainedProblem pressure_vessel() { return build_pressure_vessel(); }
ConstrainedProblem stepped_beam() { return build_stepped_beam(); }
ConstrainedProblem welded_beam() { return build_welded_beam(); }

const std::vector<std::string>& problem_ids() {
  static const std::vector<std::string> ids = {"pressure-vessel", "stepped-beam",
                                               "welded-beam"};
  return ids;
}

ConstrainedProblem make_problem(std::string_view id) {
  if (id == "pressure-vessel") return pressure_vessel();
  if (id == "stepped-beam") return stepped_beam();
  if (id == "welded-beam") return welded_beam();
  throw std::invalid_argument(fmt::format(
      "unknown engineering problem '{}' (expected pressure-vessel, stepped-beam, welded-beam)",
      id));
}

}  // namespace fwsc::constrained
