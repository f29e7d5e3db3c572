#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sharpsens/distribution.hpp"
#include "sharpsens/error.hpp"
#include "test_support.hpp"

namespace sharpsens {
namespace {

// Tail by listing all 2^n outcomes.
double naive_tail(const std::vector<double>& d, const std::vector<double>& p, double t) {
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << d.size()); ++mask) {
    double prob = 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const bool on = (mask >> i) & 1u;
      prob *= on ? p[i] : 1.0 - p[i];
      if (on) sum += d[i];
    }
    if (sum >= t - 1e-9) total += prob;
  }
  return total;
}

TEST(LatticeScale, Detection) {
  const std::vector<double> ints{1, 2, 7};
  const std::vector<double> halves{1.5, 2, 3.5};
  const std::vector<double> odd{0.3, 1};
  EXPECT_EQ(lattice_scale(ints), 1);
  EXPECT_EQ(lattice_scale(halves), 2);
  EXPECT_FALSE(lattice_scale(odd).has_value());
}

TEST(WorstCaseDistribution, SingleDiscordantPair) {
  const auto sample = testing::discordant_pairs(1, 1);
  const auto stat = build_statistic(sample, StatisticKind::McNemar);
  const auto dist = worst_case_distribution(stat, {2.0, 1.0}, sample);
  ASSERT_EQ(dist.mass.size(), 2u);
  EXPECT_NEAR(dist.mass[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(dist.mass[1], 2.0 / 3.0, 1e-15);
  EXPECT_FALSE(dist.approximate);
}

TEST(WorstCaseDistribution, SymmetricBinomialAtGammaOne) {
  const auto sample = testing::discordant_pairs(6, 3);
  const auto stat = build_statistic(sample, StatisticKind::McNemar);
  const auto dist = worst_case_distribution(stat, {1.0, 0.25}, sample);
  ASSERT_EQ(dist.mass.size(), 7u);
  for (int k = 0; k <= 6; ++k) {
    EXPECT_NEAR(dist.mass[k], testing::binomial_coefficient(6, k) / 64.0, 1e-15);
  }
}

TEST(WorstCaseDistribution, LambdaOneIsClassicalBound) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto sample = testing::random_binary_sample(rng, 15, {0.0, 0.3, 1.0});
    const auto stat = build_statistic(sample, StatisticKind::McNemar);
    const double gamma = 1.0 + trial * 0.1;
    const auto dist = worst_case_distribution(stat, {gamma, 1.0}, sample);
    for (std::size_t i = 0; i < stat.pairs.size(); ++i) {
      const auto& pr = stat.pairs[i];
      const double classical = pr.discordant() ? gamma / (1.0 + gamma) : (pr.c[0] ? 1.0 : 0.0);
      EXPECT_EQ(dist.probabilities[i], classical);
    }
  }
}

TEST(WorstCaseDistribution, DeterministicPairsShiftSupport) {
  // Two concordant-positive pairs, one concordant-negative, one discordant.
  const auto sample = testing::make_pairs({{1, 1, 0}, {1, 1, 1}, {0, 0, 0}, {1, 0, 1}});
  const auto stat = build_statistic(sample, StatisticKind::McNemar);
  const auto dist = worst_case_distribution(stat, {3.0, 1.0}, sample);
  ASSERT_EQ(dist.mass.size(), 5u);
  EXPECT_EQ(dist.mass[0], 0.0);
  EXPECT_EQ(dist.mass[1], 0.0);
  EXPECT_NEAR(dist.mass[2], 0.25, 1e-15);
  EXPECT_NEAR(dist.mass[3], 0.75, 1e-15);
  EXPECT_EQ(dist.mass[4], 0.0);
  EXPECT_NEAR(dist.upper_tail(2.0), 1.0, 1e-15);
  EXPECT_NEAR(dist.upper_tail(3.0), 0.75, 1e-15);
}

TEST(WeightedBernoulliSum, MatchesEnumerationWithHalfIntegerWeights) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> halves(0, 12);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 10;
    std::vector<double> d;
    std::vector<double> p;
    for (int i = 0; i < n; ++i) {
      d.push_back(halves(rng) / 2.0);
      p.push_back(i % 4 == 0 ? 1.0 : prob(rng));
    }
    const auto dist = weighted_bernoulli_sum(d, p);
    double mass = 0.0;
    for (double m : dist.mass) mass += m;
    EXPECT_NEAR(mass, 1.0, 1e-12);
    for (double t = -0.5; t <= 40.0; t += 0.5) {
      ASSERT_NEAR(dist.upper_tail(t), naive_tail(d, p, t), 1e-12);
    }
  }
}

TEST(WeightedBernoulliSum, OffLatticeWeights) {
  const std::vector<double> d{0.3, 1.7, 2.2};
  const std::vector<double> p{0.4, 0.5, 0.9};
  TailOptions exact;
  exact.mode = TailMode::Exact;
  try {
    weighted_bernoulli_sum(d, p, exact);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonLatticeWeights);
  }
  const auto approx = weighted_bernoulli_sum(d, p);
  EXPECT_TRUE(approx.approximate);
  const double mean = 0.3 * 0.4 + 1.7 * 0.5 + 2.2 * 0.9;
  const double var = 0.09 * 0.24 + 2.89 * 0.25 + 4.84 * 0.09;
  EXPECT_NEAR(approx.mean, mean, 1e-15);
  EXPECT_NEAR(approx.variance, var, 1e-15);
  EXPECT_NEAR(approx.upper_tail(3.0), 0.5 * std::erfc((3.0 - mean) / std::sqrt(2.0 * var)), 1e-15);
}

TEST(WeightedBernoulliSum, ContinuityCorrectionShiftsHalfStep) {
  const std::vector<double> d(10, 1.0);
  const std::vector<double> p(10, 0.5);
  TailOptions opts;
  opts.mode = TailMode::Approximate;
  opts.continuity_correction = true;
  const auto dist = weighted_bernoulli_sum(d, p, opts);
  EXPECT_NEAR(dist.upper_tail(7.0), 0.5 * std::erfc((6.5 - 5.0) / std::sqrt(2.0 * 2.5)), 1e-15);
  // Normal approximation with correction is close to the exact binomial tail.
  EXPECT_NEAR(dist.upper_tail(7.0), testing::binomial_upper_tail(10, 0.5, 7), 0.01);
}

TEST(WeightedBernoulliSum, DegenerateVarianceApproximation) {
  const std::vector<double> d{0.3};
  const std::vector<double> p{1.0};
  const auto dist = weighted_bernoulli_sum(d, p);
  EXPECT_TRUE(dist.approximate);
  EXPECT_EQ(dist.upper_tail(0.3), 1.0);
  EXPECT_EQ(dist.upper_tail(0.31), 0.0);
}

}  // namespace
}  // namespace sharpsens
