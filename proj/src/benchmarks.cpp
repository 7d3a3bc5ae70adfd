#include "fwsc/benchmarks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/core.h>
#include <fmt/ranges.h>

namespace fwsc::bench {

namespace {

using std::numbers::pi;
using Span = std::span<const double>;

const std::vector<std::size_t> kScalable = {30, 100, 500, 1000};

double sphere(Span x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double schwefel_2_22(Span x) {
  double sum = 0.0;
  double prod = 1.0;
  for (double v : x) {
    sum += std::abs(v);
    prod *= std::abs(v);
  }
  // The product overflows at high dimension near the box corners.
  return sum + prod;
}

double schwefel_1_2(Span x) {
  double s = 0.0;
  double prefix = 0.0;
  for (double v : x) {
    prefix += v;
    s += prefix * prefix;
  }
  return s;
}

double schwefel_2_21(Span x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double rosenbrock(Span x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = x[i] - 1.0;
    s += 100.0 * a * a + b * b;
  }
  return s;
}

double step(Span x) {
  double s = 0.0;
  for (double v : x) {
    const double r = std::floor(v + 0.5);
    s += r * r;
  }
  return s;
}

double quartic(Span x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v2 = x[i] * x[i];
    s += static_cast<double>(i + 1) * v2 * v2;
  }
  return s;
}

double schwefel(Span x) {
  double s = 0.0;
  for (double v : x) s -= v * std::sin(std::sqrt(std::abs(v)));
  return s;
}

double rastrigin(Span x) {
  double s = 0.0;
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * pi * v) + 10.0;
  return s;
}

double ackley(Span x) {
  const double n = static_cast<double>(x.size());
  double sq = 0.0;
  double cs = 0.0;
  for (double v : x) {
    sq += v * v;
    cs += std::cos(2.0 * pi * v);
  }
  return -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 + std::numbers::e;
}

double griewank(Span x) {
  double sum = 0.0;
  double prod = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += x[i] * x[i];
    prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return sum / 4000.0 - prod + 1.0;
}

double penalized(Span x) {
  const std::size_t n = x.size();
  const auto y = [&](std::size_t i) { return 1.0 + (x[i] + 1.0) / 4.0; };
  const double s0 = std::sin(pi * y(0));
  double s = 10.0 * s0 * s0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = y(i) - 1.0;
    const double si = std::sin(pi * y(i + 1));
    s += d * d * (1.0 + 10.0 * si * si);
  }
  const double dn = y(n - 1) - 1.0;
  s += dn * dn;
  double u = 0.0;
  for (double v : x) u += boundary_penalty(v, 10.0, 100.0, 4.0);
  return pi / static_cast<double>(n) * s + u;
}

double penalized2(Span x) {
  const std::size_t n = x.size();
  const double s0 = std::sin(3.0 * pi * x[0]);
  double s = s0 * s0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = x[i] - 1.0;
    const double si = std::sin(3.0 * pi * x[i + 1]);
    s += d * d * (1.0 + si * si);
  }
  const double dn = x[n - 1] - 1.0;
  const double sn = std::sin(2.0 * pi * x[n - 1]);
  s += dn * dn * (1.0 + sn * sn);
  double u = 0.0;
  for (double v : x) u += boundary_penalty(v, 5.0, 100.0, 4.0);
  return 0.1 * s + u;
}

double foxholes(Span x) {
  static constexpr std::array<double, 5> grid = {-32.0, -16.0, 0.0, 16.0, 32.0};
  double s = 1.0 / 500.0;
  for (int j = 0; j < 25; ++j) {
    const double a1 = grid[static_cast<std::size_t>(j % 5)];
    const double a2 = grid[static_cast<std::size_t>(j / 5)];
    const double d1 = x[0] - a1;
    const double d2 = x[1] - a2;
    s += 1.0 / (j + 1 + std::pow(d1, 6) + std::pow(d2, 6));
  }
  return 1.0 / s;
}

double kowalik(Span x) {
  static constexpr std::array<double, 11> a = {0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627,
                                               0.0456, 0.0342, 0.0323, 0.0235, 0.0246};
  static constexpr std::array<double, 11> b_inv = {0.25, 0.5, 1.0, 2.0, 4.0, 6.0,
                                                   8.0,  10.0, 12.0, 14.0, 16.0};
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double b = 1.0 / b_inv[i];
    const double model = x[0] * (b * b + b * x[1]) / (b * b + b * x[2] + x[3]);
    const double r = a[i] - model;
    s += r * r;
  }
  return s;
}

double six_hump_camel(Span x) {
  const double x1 = x[0];
  const double x2 = x[1];
  return 4.0 * x1 * x1 - 2.1 * std::pow(x1, 4) + std::pow(x1, 6) / 3.0 + x1 * x2 -
         4.0 * x2 * x2 + 4.0 * std::pow(x2, 4);
}

double branin(Span x) {
  const double b = 5.1 / (4.0 * pi * pi);
  const double c = 5.0 / pi;
  const double t = 1.0 / (8.0 * pi);
  const double r = x[1] - b * x[0] * x[0] + c * x[0] - 6.0;
  return r * r + 10.0 * (1.0 - t) * std::cos(x[0]) + 10.0;
}

double goldstein_price(Span x) {
  const double x1 = x[0];
  const double x2 = x[1];
  const double s = x1 + x2 + 1.0;
  const double d = 2.0 * x1 - 3.0 * x2;
  const double a = 1.0 + s * s *
                             (19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 +
                              3.0 * x2 * x2);
  const double b = 30.0 + d * d *
                              (18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 +
                               27.0 * x2 * x2);
  return a * b;
}

template <std::size_t Dim>
double hartman(Span x, const std::array<std::array<double, Dim>, 4>& a,
               const std::array<std::array<double, Dim>, 4>& p) {
  static constexpr std::array<double, 4> c = {1.0, 1.2, 3.0, 3.2};
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < Dim; ++j) {
      const double d = x[j] - p[i][j];
      inner += a[i][j] * d * d;
    }
    s -= c[i] * std::exp(-inner);
  }
  return s;
}

double hartman3(Span x) {
  static constexpr std::array<std::array<double, 3>, 4> a = {{
      {3.0, 10.0, 30.0},
      {0.1, 10.0, 35.0},
      {3.0, 10.0, 30.0},
      {0.1, 10.0, 35.0},
  }};
  static constexpr std::array<std::array<double, 3>, 4> p = {{
      {0.3689, 0.1170, 0.2673},
      {0.4699, 0.4387, 0.7470},
      {0.1091, 0.8732, 0.5547},
      {0.038150, 0.5743, 0.8828},
  }};
  return hartman<3>(x, a, p);
}

double hartman6(Span x) {
  static constexpr std::array<std::array<double, 6>, 4> a = {{
      {10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
      {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
      {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
      {17.0, 8.0, 0.05, 10.0, 0.1, 14.0},
  }};
  static constexpr std::array<std::array<double, 6>, 4> p = {{
      {0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
      {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
      {0.2348, 0.1415, 0.3522, 0.2883, 0.3047, 0.6650},
      {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381},
  }};
  return hartman<6>(x, a, p);
}

double shekel(Span x, std::size_t m) {
  static constexpr std::array<std::array<double, 4>, 10> a = {{
      {4.0, 4.0, 4.0, 4.0},
      {1.0, 1.0, 1.0, 1.0},
      {8.0, 8.0, 8.0, 8.0},
      {6.0, 6.0, 6.0, 6.0},
      {3.0, 7.0, 3.0, 7.0},
      {2.0, 9.0, 2.0, 9.0},
      {5.0, 5.0, 3.0, 3.0},
      {8.0, 1.0, 8.0, 1.0},
      {6.0, 2.0, 6.0, 2.0},
      {7.0, 3.6, 7.0, 3.6},
  }};
  static constexpr std::array<double, 10> c = {0.1, 0.2, 0.2, 0.4, 0.4,
                                               0.6, 0.3, 0.7, 0.5, 0.5};
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
      const double diff = x[j] - a[i][j];
      d += diff * diff;
    }
    s -= 1.0 / (d + c[i]);
  }
  return s;
}

using Pure = double (*)(Span);

Pure function_for(int number) {
  switch (number) {
    case 1: return sphere;
    case 2: return schwefel_2_22;
    case 3: return schwefel_1_2;
    case 4: return schwefel_2_21;
    case 5: return rosenbrock;
    case 6: return step;
    case 7: return quartic;
    case 8: return schwefel;
    case 9: return rastrigin;
    case 10: return ackley;
    case 11: return griewank;
    case 12: return penalized;
    case 13: return penalized2;
    case 14: return foxholes;
    case 15: return kowalik;
    case 16: return six_hump_camel;
    case 17: return branin;
    case 18: return goldstein_price;
    case 19: return hartman3;
    case 20: return hartman6;
    case 21: return [](Span x) { return shekel(x, 5); };
    case 22: return [](Span x) { return shekel(x, 7); };
    case 23: return [](Span x) { return shekel(x, 10); };
    default: break;
  }
  throw BenchmarkError(fmt::format("no benchmark F{}", number));
}

std::vector<BenchmarkSpec> build_specs() {
  using C = Category;
  const auto scalable = [](int n, std::string name, C cat, double lo, double hi,
                           double fmin, bool scales = false) {
    return BenchmarkSpec{n, fmt::format("F{}", n), std::move(name), cat, kScalable,
                         lo, hi, fmin, scales};
  };
  const auto fixed = [](int n, std::string name, std::size_t dim, double lo, double hi,
                        double fmin) {
    return BenchmarkSpec{n, fmt::format("F{}", n), std::move(name), C::fixed_dimension,
                         {dim}, lo, hi, fmin, false};
  };
  return {
      scalable(1, "Sphere", C::unimodal_separable, -100, 100, 0),
      scalable(2, "Schwefel 2.22", C::unimodal_nonseparable, -10, 10, 0),
      scalable(3, "Schwefel 1.2", C::unimodal_nonseparable, -100, 100, 0),
      scalable(4, "Schwefel 2.21", C::unimodal_separable, -100, 100, 0),
      scalable(5, "Rosenbrock", C::unimodal_nonseparable, -30, 30, 0),
      scalable(6, "Step", C::unimodal_separable, -100, 100, 0),
      scalable(7, "Quartic", C::unimodal_separable, -128, 128, 0),
      scalable(8, "Schwefel", C::multimodal_separable, -500, 500, -418.9829, true),
      scalable(9, "Rastrigin", C::multimodal_separable, -5.12, 5.12, 0),
      scalable(10, "Ackley", C::multimodal_nonseparable, -32, 32, 0),
      scalable(11, "Griewank", C::multimodal_nonseparable, -600, 600, 0),
      scalable(12, "Penalized", C::multimodal_nonseparable, -50, 50, 0),
      scalable(13, "Penalized2", C::multimodal_nonseparable, -50, 50, 0),
      fixed(14, "Foxholes", 2, -65, 65, 1),
      fixed(15, "Kowalik", 4, -5, 5, 0.0003),
      fixed(16, "Six Hump Camel", 2, -5, 5, -1.0316),
      fixed(17, "Branin", 2, -5, 5, 0.398),
      fixed(18, "Goldstein-Price", 2, -2, 2, 3),
      fixed(19, "Hartman 3", 3, 1, 3, -3.86),
      fixed(20, "Hartman 6", 6, 0, 1, -3.32),
      fixed(21, "Shekel 5", 4, 0, 10, -10.1532),
      fixed(22, "Shekel 7", 4, 0, 10, -10.4028),
      fixed(23, "Shekel 10", 4, 0, 10, -10.5363),
  };
}

const BenchmarkSpec& checked_spec(std::string_view id, std::size_t dimension) {
  const BenchmarkSpec& s = spec(id);
  if (!s.allows(dimension)) {
    throw BenchmarkError(fmt::format("{} ({}) does not support dimension {}; allowed: {{{}}}",
                                     s.id, s.name, dimension,
                                     fmt::join(s.allowed_dimensions, ", ")));
  }
  return s;
}

}  // namespace

std::string_view to_string(Category c) {
  switch (c) {
    case Category::unimodal_separable: return "US";
    case Category::unimodal_nonseparable: return "UN";
    case Category::multimodal_separable: return "MS";
    case Category::multimodal_nonseparable: return "MN";
    case Category::fixed_dimension: return "FM";
  }
  return "?";
}

bool BenchmarkSpec::allows(std::size_t dimension) const {
  return std::find(allowed_dimensions.begin(), allowed_dimensions.end(), dimension) !=
         allowed_dimensions.end();
}

const std::vector<BenchmarkSpec>& all_specs() {
  static const std::vector<BenchmarkSpec> specs = build_specs();
  return specs;
}

const BenchmarkSpec& spec(std::string_view id) {
  for (const auto& s : all_specs()) {
    if (s.id == id) return s;
  }
  throw BenchmarkError(fmt::format("unknown benchmark id '{}' (expected F1..F23)", id));
}

double boundary_penalty(double x, double a, double k, double m) {
  if (x > a) return k * std::pow(x - a, m);
  if (x < -a) return k * std::pow(-x - a, m);
  return 0.0;
}

ObjectiveProblem make_benchmark(std::string_view id, std::size_t dimension,
                                BenchmarkOptions options) {
  const BenchmarkSpec& s = checked_spec(id, dimension);
  const Pure f = function_for(s.number);
  Objective objective;
  if (s.number == 7 && options.noise) {
    objective = [f](Span x, RandomStream& noise) { return f(x) + noise.uniform(); };
  } else {
    objective = [f](Span x, RandomStream&) { return f(x); };
  }
  return ObjectiveProblem{s.id, Bounds::uniform(dimension, s.range_lo, s.range_hi),
                          std::move(objective)};
}

double known_optimum(std::string_view id, std::size_t dimension) {
  const BenchmarkSpec& s = checked_spec(id, dimension);
  return s.scales_with_dimension ? s.f_min * static_cast<double>(dimension) : s.f_min;
}

std::optional<Vector> optimum_witness(std::string_view id, std::size_t dimension) {
  const BenchmarkSpec& s = checked_spec(id, dimension);
  switch (s.number) {
    case 1: case 2: case 3: case 4: case 6: case 7: case 9: case 10: case 11:
      return Vector(dimension, 0.0);
    case 5:
    case 13:
      return Vector(dimension, 1.0);
    case 12:
      return Vector(dimension, -1.0);
    case 18:
      return Vector{0.0, -1.0};
    default:
      // The remaining tables list rounded minima that no exact point attains.
      return std::nullopt;
  }
}

}  // namespace fwsc::bench
