#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fwsc/core.hpp"
#include "fwsc/stats.hpp"
#include "oracles.hpp"

using namespace fwsc;
using namespace fwsc::stats;

namespace {

// Paired samples whose differences are exactly `diffs`.
PairedSamples from_differences(const std::vector<double>& diffs) {
  PairedSamples s;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    s.b.push_back(100.0 + static_cast<double>(i));
    s.a.push_back(s.b.back() + diffs[i]);
  }
  return s;
}

ResultMatrix matrix_of(const std::vector<std::vector<double>>& rows) {
  ResultMatrix m;
  for (std::size_t j = 0; j < rows.front().size(); ++j) m.algorithms.push_back("A" + std::to_string(j));
  m.values = rows;
  return m;
}

}  // namespace

TEST_CASE("signed ranks of a hand example") {
  const WilcoxonResult r = wilcoxon_signed_rank(from_differences({1, -2, 3, -4, 5}));
  CHECK(r.t_plus == 9.0);
  CHECK(r.t_minus == 6.0);
  CHECK(r.n == 5);
  CHECK(r.exact);
  CHECK(r.p_value == doctest::Approx(oracle::enumerate_signed_rank({1, -2, 3, -4, 5}, {0, 0, 0, 0, 0}).p_value));
}

TEST_CASE("all-zero differences carry no information") {
  const std::vector<double> v{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(wilcoxon_signed_rank({v, v}), NoInformation);
  CHECK_THROWS_AS(wilcoxon_signed_rank({{1.0}, {1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("exact p matches full sign enumeration up to n = 13") {
  RandomStream rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t len = 2 + rng.below(12);
    std::vector<double> a(len);
    std::vector<double> b(len);
    for (std::size_t i = 0; i < len; ++i) {
      // a small value alphabet produces zeros and tied magnitudes
      a[i] = static_cast<double>(rng.below(trial % 2 == 0 ? 6 : 1000));
      b[i] = static_cast<double>(rng.below(trial % 2 == 0 ? 6 : 1000));
    }
    const auto expected = oracle::enumerate_signed_rank(a, b);
    if (expected.n == 0) continue;
    const WilcoxonResult got = wilcoxon_signed_rank({a, b});
    CHECK(got.n == expected.n);
    CHECK(got.t_plus == expected.t_plus);
    CHECK(got.t_minus == expected.t_minus);
    CHECK(std::abs(got.p_value - expected.p_value) <= 1e-12);
    const double n = static_cast<double>(got.n);
    CHECK(got.t_plus + got.t_minus == n * (n + 1) / 2);

    const WilcoxonResult swapped = wilcoxon_signed_rank({b, a});
    CHECK(swapped.t_plus == got.t_minus);
    CHECK(swapped.p_value == got.p_value);
  }
}

TEST_CASE("exact p-values of reference pairwise comparisons") {
  // Reference (T+, T-, p) rows of a 13-problem comparison; n follows from
  // T+ + T- = n(n+1)/2.
  struct Row {
    double t_plus, t_minus, p;
  };
  const Row rows[] = {{47, 19, 0.2402}, {12, 79, 0.0171}, {33, 45, 0.6772}, {30, 61, 0.3054},
                      {26, 40, 0.5771}, {35, 31, 0.8984}, {13, 78, 0.0215}, {18, 73, 0.0574},
                      {29, 62, 0.2734}, {19, 72, 0.0681}, {63, 28, 0.2439}, {19, 59, 0.1294},
                      {19, 17, 0.9453}};
  for (const auto& row : rows) {
    CAPTURE(row.t_plus);
    const double total = row.t_plus + row.t_minus;
    const auto n = static_cast<std::size_t>(std::lround((std::sqrt(8 * total + 1) - 1) / 2));
    REQUIRE(static_cast<double>(n * (n + 1) / 2) == total);
    // greedy choice of positive ranks summing to T+
    std::vector<double> diffs(n);
    double remaining = row.t_plus;
    for (std::size_t r = n; r >= 1; --r) {
      const bool positive = static_cast<double>(r) <= remaining;
      if (positive) remaining -= static_cast<double>(r);
      diffs[r - 1] = positive ? static_cast<double>(r) : -static_cast<double>(r);
    }
    REQUIRE(remaining == 0.0);
    const WilcoxonResult w = wilcoxon_signed_rank(from_differences(diffs));
    CHECK(w.t_plus == row.t_plus);
    CHECK(w.t_minus == row.t_minus);
    CHECK(std::round(w.p_value * 1e4) / 1e4 == doctest::Approx(row.p).epsilon(1e-9));
  }
}

TEST_CASE("normal approximation above twenty pairs") {
  // Reference value from an independent implementation (tie-corrected
  // variance, no continuity correction).
  const std::vector<double> d{1.5, -2, 3, 3, -4.5, 5, 6, -6, 7, 8, 9, -10, 11, 12,
                              12, -13, 14, 15, 16, -17, 18, 19, 20, 21, -22, 0, 0};
  const WilcoxonResult w = wilcoxon_signed_rank(from_differences(d));
  CHECK_FALSE(w.exact);
  CHECK(w.n == 25);
  CHECK(w.t_plus == 237.5);
  CHECK(w.t_minus == 87.5);
  CHECK(w.p_value == doctest::Approx(0.04356082017144097).epsilon(1e-12));
}

TEST_CASE("mid-ranks") {
  CHECK(mid_ranks({10, 20, 20, 5}) == std::vector<double>{2, 3.5, 3.5, 1});
  CHECK(mid_ranks({1, 1, 1}) == std::vector<double>{2, 2, 2});
}

TEST_CASE("friedman mean ranks: identical columns and dominance") {
  const ResultMatrix same = matrix_of({{1, 1, 1}, {5, 5, 5}, {2, 2, 2}});
  CHECK(friedman_mean_ranks(same).mean_ranks == std::vector<double>{2, 2, 2});
  CHECK(friedman_mean_ranks(same).ranking == std::vector<int>{1, 1, 1});
  const FriedmanTest t0 = friedman_statistic(same);
  CHECK(t0.chi_square == 0.0);
  CHECK(t0.p_value == 1.0);

  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({static_cast<double>(i), i + 0.5});
  const ResultMatrix dom = matrix_of(rows);
  CHECK(friedman_mean_ranks(dom).mean_ranks == std::vector<double>{1.0, 2.0});
  CHECK(friedman_statistic(dom).chi_square == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(friedman_statistic(dom).degrees_of_freedom == 1);
}

TEST_CASE("friedman mean ranks match the permutation oracle") {
  CHECK(friedman_mean_ranks(matrix_of({{3, 1, 2}, {1, 1, 2}, {2, 3, 1}})).mean_ranks ==
        oracle::friedman_mean_ranks({{3, 1, 2}, {1, 1, 2}, {2, 3, 1}}));
  RandomStream rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> rows(5, std::vector<double>(5));
    for (auto& row : rows) {
      for (double& v : row) v = static_cast<double>(rng.below(trial % 2 == 0 ? 3 : 100));
    }
    const auto expected = oracle::friedman_mean_ranks(rows);
    const auto got = friedman_mean_ranks(matrix_of(rows)).mean_ranks;
    // both sides are sums of halves divided by 5, exact in binary up to the division
    for (std::size_t j = 0; j < 5; ++j) CHECK(got[j] == doctest::Approx(expected[j]).epsilon(1e-15));
  }
}

TEST_CASE("friedman statistic equals the rank-variance form under ties") {
  RandomStream rng(66);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(8);
    const std::size_t k = 2 + rng.below(5);
    std::vector<std::vector<double>> rows(n, std::vector<double>(k));
    for (auto& row : rows) {
      for (double& v : row) v = static_cast<double>(rng.below(4));
    }
    CHECK(friedman_statistic(matrix_of(rows)).chi_square ==
          doctest::Approx(oracle::friedman_conover(rows)).epsilon(1e-9));
  }
}

TEST_CASE("friedman statistic on a tied fixture") {
  // Reference from an independent implementation.
  const ResultMatrix m = matrix_of(
      {{1, 2, 3, 4}, {2, 2, 1, 3}, {5, 1, 1, 1}, {0.5, 0.7, 0.6, 0.9}, {3, 3, 3, 3}, {1, 4, 2, 3}});
  const FriedmanTest t = friedman_statistic(m);
  CHECK(t.chi_square == doctest::Approx(4.866666666666674).epsilon(1e-12));
  CHECK(t.p_value == doctest::Approx(0.1818249018059912).epsilon(1e-10));
  CHECK(t.degrees_of_freedom == 3);
}

TEST_CASE("friedman invariances") {
  RandomStream rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<double>> rows(6, std::vector<double>(4));
    for (auto& row : rows) {
      for (double& v : row) v = rng.uniform(-5.0, 5.0);
    }
    const auto base = friedman_mean_ranks(matrix_of(rows));
    auto transformed = rows;
    for (auto& row : transformed) {
      for (double& v : row) v = std::exp(v) * 3.0 + 1.0;
    }
    CHECK(friedman_mean_ranks(matrix_of(transformed)).mean_ranks == base.mean_ranks);

    auto permuted = rows;
    for (auto& row : permuted) std::rotate(row.begin(), row.begin() + 1, row.end());
    const auto rotated = friedman_mean_ranks(matrix_of(permuted)).mean_ranks;
    for (std::size_t j = 0; j < 4; ++j) CHECK(rotated[j] == base.mean_ranks[(j + 1) % 4]);
    CHECK(friedman_statistic(matrix_of(permuted)).chi_square ==
          doctest::Approx(friedman_statistic(matrix_of(rows)).chi_square));
  }
}

TEST_CASE("dense ranking shares ordinals between equal means") {
  const std::vector<double> means{6.5, 8.25, 6.15, 6.75, 6.5, 6.15, 7.2,
                                  6.9, 6.5, 6.5, 7.35, 6.15, 13.05, 10.95};
  CHECK(dense_ranking(means) == std::vector<int>{2, 7, 1, 3, 2, 1, 5, 4, 2, 2, 6, 1, 9, 8});
  CHECK(dense_ranking({0.1 + 0.2, 0.3}) == std::vector<int>{1, 1});
}

TEST_CASE("matrix validation") {
  CHECK_THROWS_AS(friedman_mean_ranks(matrix_of({{1, 2}})), std::invalid_argument);
  ResultMatrix ragged = matrix_of({{1, 2}, {1, 2}});
  ragged.values[1].push_back(3);
  CHECK_THROWS_AS(friedman_statistic(ragged), std::invalid_argument);
}

TEST_CASE("chi-square survival") {
  CHECK(chi_square_survival(0.0, 3) == 1.0);
  CHECK(chi_square_survival(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(chi_square_survival(2.0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}
