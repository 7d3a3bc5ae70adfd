#include "fwsc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/core.h>

namespace fwsc::stats {

namespace {

// Sizes of the groups of tied values.
std::vector<std::size_t> tie_groups(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<std::size_t> groups;
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i + 1;
    while (j < values.size() && values[j] == values[i]) ++j;
    groups.push_back(j - i);
    i = j;
  }
  return groups;
}

double tie_sum(const std::vector<std::size_t>& groups) {
  double s = 0.0;
  for (std::size_t t : groups) {
    const double td = static_cast<double>(t);
    s += td * td * td - td;
  }
  return s;
}

// P(T+ <= threshold) under the sign-flip null, with mid-ranks allowed.
// Ranks are doubled so every mid-rank becomes an integer.
double exact_lower_tail(const std::vector<double>& ranks, double threshold) {
  std::vector<std::size_t> doubled;
  std::size_t total = 0;
  for (double r : ranks) {
    doubled.push_back(static_cast<std::size_t>(std::lround(2.0 * r)));
    total += doubled.back();
  }
  std::vector<double> counts(total + 1, 0.0);
  counts[0] = 1.0;
  std::size_t reach = 0;
  for (std::size_t d : doubled) {
    for (std::size_t s = reach + 1; s-- > 0;) counts[s + d] += counts[s];
    reach += d;
  }
  const auto limit = static_cast<long>(std::lround(2.0 * threshold));
  double below = 0.0;
  for (long s = 0; s <= limit && s <= static_cast<long>(total); ++s) {
    below += counts[static_cast<std::size_t>(s)];
  }
  return std::ldexp(below, -static_cast<int>(ranks.size()));
}

}  // namespace

std::vector<double> mid_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t m = i; m < j; ++m) ranks[order[m]] = mid;
    i = j;
  }
  return ranks;
}

WilcoxonResult wilcoxon_signed_rank(const PairedSamples& samples) {
  if (samples.a.size() != samples.b.size()) {
    throw std::invalid_argument("paired samples must have equal lengths");
  }
  std::vector<double> diffs;
  for (std::size_t i = 0; i < samples.a.size(); ++i) {
    const double d = samples.a[i] - samples.b[i];
    if (d != 0.0) diffs.push_back(d);
  }
  if (diffs.empty()) throw NoInformation();

  std::vector<double> magnitudes(diffs.size());
  std::transform(diffs.begin(), diffs.end(), magnitudes.begin(),
                 [](double d) { return std::abs(d); });
  const std::vector<double> ranks = mid_ranks(magnitudes);

  WilcoxonResult r{};
  r.n = diffs.size();
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    (diffs[i] > 0.0 ? r.t_plus : r.t_minus) += ranks[i];
  }
  const double t_low = std::min(r.t_plus, r.t_minus);
  if (r.n <= kExactWilcoxonLimit) {
    r.exact = true;
    r.p_value = std::min(1.0, 2.0 * exact_lower_tail(ranks, t_low));
  } else {
    const double n = static_cast<double>(r.n);
    const double mean = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_sum(tie_groups(magnitudes)) / 48.0;
    const double z = (r.t_plus - mean) / std::sqrt(var);
    r.exact = false;
    r.p_value = std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
  }
  return r;
}

void ResultMatrix::validate() const {
  if (algorithms.size() < 2) throw std::invalid_argument("need at least two algorithms");
  if (values.size() < 2) throw std::invalid_argument("need at least two problems");
  if (!problems.empty() && problems.size() != values.size()) {
    throw std::invalid_argument("problem labels do not match the number of rows");
  }
  for (std::size_t r = 0; r < values.size(); ++r) {
    if (values[r].size() != algorithms.size()) {
      throw std::invalid_argument(fmt::format("row {} has {} values, expected {}", r,
                                              values[r].size(), algorithms.size()));
    }
  }
}

std::vector<int> dense_ranking(const std::vector<double>& scores) {
  std::vector<double> distinct = scores;
  std::sort(distinct.begin(), distinct.end());
  // Mean ranks that agree to 1e-9 are the same score computed along different sums.
  std::vector<double> levels;
  for (double v : distinct) {
    if (levels.empty() || v - levels.back() > 1e-9) levels.push_back(v);
  }
  std::vector<int> ranking;
  ranking.reserve(scores.size());
  for (double s : scores) {
    const auto it = std::find_if(levels.begin(), levels.end(),
                                 [s](double level) { return std::abs(level - s) <= 1e-9; });
    ranking.push_back(static_cast<int>(it - levels.begin()) + 1);
  }
  return ranking;
}

FriedmanRanks friedman_mean_ranks(const ResultMatrix& matrix) {
  matrix.validate();
  const std::size_t k = matrix.columns();
  FriedmanRanks out;
  out.mean_ranks.assign(k, 0.0);
  for (const auto& row : matrix.values) {
    const std::vector<double> ranks = mid_ranks(row);
    for (std::size_t j = 0; j < k; ++j) out.mean_ranks[j] += ranks[j];
  }
  for (double& m : out.mean_ranks) m /= static_cast<double>(matrix.rows());
  out.ranking = dense_ranking(out.mean_ranks);
  return out;
}

FriedmanTest friedman_statistic(const ResultMatrix& matrix) {
  const FriedmanRanks ranks = friedman_mean_ranks(matrix);
  const double k = static_cast<double>(matrix.columns());
  const double n = static_cast<double>(matrix.rows());

  double sum_sq = 0.0;
  for (double r : ranks.mean_ranks) sum_sq += r * r;
  const double spread = sum_sq - k * (k + 1.0) * (k + 1.0) / 4.0;

  double ties = 0.0;
  for (const auto& row : matrix.values) ties += tie_sum(tie_groups(row));
  const double correction = 1.0 - ties / (n * (k * k * k - k));

  FriedmanTest t{};
  t.degrees_of_freedom = matrix.columns() - 1;
  // Rows that are entirely tied carry no information; spread is then zero too.
  if (correction <= 0.0 || spread <= 1e-12) {
    t.chi_square = 0.0;
  } else {
    t.chi_square = 12.0 * n / (k * (k + 1.0)) * spread / correction;
  }
  t.p_value = chi_square_survival(t.chi_square, static_cast<double>(t.degrees_of_freedom));
  return t;
}

double chi_square_survival(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

}  // namespace fwsc::stats
