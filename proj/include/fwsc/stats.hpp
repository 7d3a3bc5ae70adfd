#pragma once

// Nonparametric comparison of optimizers: pairwise Wilcoxon signed-rank test
// and Friedman ranking across problems.

#include <stdexcept>
#include <string>
#include <vector>

namespace fwsc::stats {

/// Per-problem results of two algorithms, paired by index.
struct PairedSamples {
  std::vector<double> a;
  std::vector<double> b;
};

/// Raised when every paired difference is zero.
class NoInformation : public std::domain_error {
public:
  NoInformation() : std::domain_error("no information: all paired differences are zero") {}
};

struct WilcoxonResult {
  double p_value;        // two-sided
  double t_plus;         // rank sum of a - b > 0
  double t_minus;        // rank sum of a - b < 0
  std::size_t n;         // nonzero differences
  bool exact;            // exact null distribution vs normal approximation
};

/// Largest n (after dropping zeros) for which the exact null distribution is used.
inline constexpr std::size_t kExactWilcoxonLimit = 20;

WilcoxonResult wilcoxon_signed_rank(const PairedSamples& samples);

/// Mid-ranks (1-based) of `values`, ascending.
std::vector<double> mid_ranks(const std::vector<double>& values);

/// Problems (rows) by algorithms (columns).
struct ResultMatrix {
  std::vector<std::string> algorithms;
  std::vector<std::string> problems;
  std::vector<std::vector<double>> values;  // values[row][column]

  std::size_t rows() const { return values.size(); }
  std::size_t columns() const { return algorithms.size(); }
  /// Throws std::invalid_argument if ragged or too small.
  void validate() const;
};

struct FriedmanRanks {
  std::vector<double> mean_ranks;
  /// Dense ordinal ranking: 1 for the smallest mean rank, equal means share.
  std::vector<int> ranking;
};

FriedmanRanks friedman_mean_ranks(const ResultMatrix& matrix);

/// Dense ranking of arbitrary scores (smallest first).
std::vector<int> dense_ranking(const std::vector<double>& scores);

struct FriedmanTest {
  double chi_square;
  double p_value;
  std::size_t degrees_of_freedom;
};

/// Tie-corrected Friedman statistic with a chi-square(k - 1) tail.
FriedmanTest friedman_statistic(const ResultMatrix& matrix);

/// Upper tail of the chi-square distribution.
double chi_square_survival(double x, double dof);

}  // namespace fwsc::stats
