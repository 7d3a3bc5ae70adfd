#pragma once

// F1-F23 test functions: unimodal, multimodal and fixed-dimension multimodal.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fwsc/core.hpp"

namespace fwsc::bench {

enum class Category {
  unimodal_separable,
  unimodal_nonseparable,
  multimodal_separable,
  multimodal_nonseparable,
  fixed_dimension,
};

std::string_view to_string(Category c);

struct BenchmarkSpec {
  int number;             // 1..23
  std::string id;         // "F1".."F23"
  std::string name;
  Category category;
  std::vector<std::size_t> allowed_dimensions;
  double range_lo;
  double range_hi;
  double f_min;           // per table; multiplied by n when scales_with_dimension
  bool scales_with_dimension = false;

  bool allows(std::size_t dimension) const;
};

/// Raised for unknown ids and disallowed dimensions.
class BenchmarkError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct BenchmarkOptions {
  /// F7 adds uniform [0, 1) noise per evaluation unless disabled.
  bool noise = true;
};

const std::vector<BenchmarkSpec>& all_specs();
const BenchmarkSpec& spec(std::string_view id);

ObjectiveProblem make_benchmark(std::string_view id, std::size_t dimension,
                                BenchmarkOptions options = {});

double known_optimum(std::string_view id, std::size_t dimension);

/// A point attaining known_optimum exactly (to rounding), when one is known
/// in closed form.
std::optional<Vector> optimum_witness(std::string_view id, std::size_t dimension);

/// Penalty term u(x, a, k, m) shared by F12 and F13.
double boundary_penalty(double x, double a, double k, double m);

}  // namespace fwsc::bench
