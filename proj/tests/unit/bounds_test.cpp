#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sharpsens/bounds.hpp"
#include "sharpsens/error.hpp"
#include "sharpsens/oracle.hpp"
#include "test_support.hpp"

namespace sharpsens {
namespace {

using testing::make_pairs;

double round2(double v) { return std::round(v * 100.0) / 100.0; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

TEST(GammaLambda, ReferenceTableCells) {
  EXPECT_DOUBLE_EQ(round2(gamma_lambda(2.0, 0.5, 0.4)), 1.74);
  EXPECT_DOUBLE_EQ(round2(gamma_lambda(3.0, 4.0, 0.6)), 2.16);
  EXPECT_DOUBLE_EQ(round2(gamma_lambda(2.0, 8.0, 0.0)), 1.09);
}

TEST(GammaLambda, LambdaOneGivesGamma) {
  for (double x : {0.0, 0.13, 0.5, 1.0}) EXPECT_EQ(gamma_lambda(2.7, 1.0, x), 2.7);
}

TEST(GammaLambda, LambdaZeroAccepted) {
  EXPECT_DOUBLE_EQ(gamma_lambda(4.0, 0.0, 0.5), 2.0);
  EXPECT_EQ(gamma_lambda(4.0, 0.0, 1.0), 1.0);
  EXPECT_EQ(gamma_lambda(4.0, 0.0, 0.0), 4.0);
}

TEST(GammaLambda, Errors) {
  EXPECT_EQ(code_of([] { gamma_lambda(1.0, 0.5, 0.2); }), ErrorCode::InvalidGamma);
  EXPECT_EQ(code_of([] { gamma_lambda(0.5, 0.5, 0.2); }), ErrorCode::InvalidGamma);
  EXPECT_EQ(code_of([] { gamma_lambda(2.0, 0.5, 1.2); }), ErrorCode::InvalidXNorm);
  EXPECT_EQ(code_of([] { gamma_lambda(2.0, 0.5, -0.1); }), ErrorCode::InvalidXNorm);
  EXPECT_EQ(code_of([] { gamma_lambda(2.0, INFINITY, 0.2); }), ErrorCode::NonFiniteLambda);
  EXPECT_EQ(code_of([] { gamma_lambda(2.0, NAN, 0.2); }), ErrorCode::NonFiniteLambda);
}

TEST(GammaLambdaBinary, Cases) {
  EXPECT_DOUBLE_EQ(gamma_lambda_binary(2.0, 0.5, 1), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(round2(gamma_lambda_binary(2.0, 0.5, 1)), 1.41);
  EXPECT_DOUBLE_EQ(gamma_lambda_binary(3.0, 8.0, 0), std::pow(3.0, 0.125));
  EXPECT_DOUBLE_EQ(round2(gamma_lambda_binary(3.0, 8.0, 0)), 1.15);
  EXPECT_EQ(gamma_lambda_binary(2.0, -1.0, 0), 2.0);
  EXPECT_EQ(gamma_lambda_binary(2.0, 0.3, 0), 2.0);
  EXPECT_EQ(gamma_lambda_binary(2.0, 5.0, 1), 2.0);
  EXPECT_EQ(code_of([] { gamma_lambda_binary(2.0, 5.0, 2); }), ErrorCode::InvalidXNorm);
}

TEST(GammaLambda, EnvelopeAndEqualityConditions) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> g(1.0 + 1e-9, 20.0);
  std::uniform_real_distribution<double> l(-10.0, 10.0);
  std::uniform_real_distribution<double> x(0.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    const double gamma = g(rng);
    const double lambda = l(rng);
    const double xn = i % 10 == 0 ? 0.0 : (i % 10 == 1 ? 1.0 : x(rng));
    const double v = gamma_lambda(gamma, lambda, xn);
    ASSERT_GE(v, 1.0);
    ASSERT_LE(v, gamma);
    const bool cond = lambda == 1.0 || (std::abs(lambda) <= 1.0 && xn == 0.0) ||
                      (std::abs(lambda) >= 1.0 && xn == 1.0);
    ASSERT_EQ(attains_gamma(lambda, xn), cond) << lambda << " " << xn;
    if (cond) ASSERT_EQ(v, gamma);
  }
}

TEST(GammaLambda, BranchesAgreeAtUnitMagnitude) {
  for (double xn = 0.0; xn <= 1.0; xn += 0.05) {
    for (double lambda : {1.0, -1.0}) {
      const double below = std::abs((lambda - 1.0) * xn + 1.0);
      const double above = std::abs((1.0 - 1.0 / lambda) * xn + 1.0 / lambda);
      EXPECT_NEAR(below, above, 1e-15);
      EXPECT_NEAR(bound_exponent(lambda, xn), below, 1e-15);
      // Just past the branch point on either side.
      const double in = lambda * (1.0 - 1e-12);
      const double out = lambda * (1.0 + 1e-12);
      EXPECT_NEAR(bound_exponent(in, xn), bound_exponent(out, xn), 1e-10);
    }
  }
}

TEST(GammaLambda, MonotoneInGamma) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> l(-6.0, 6.0);
  std::uniform_real_distribution<double> x(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double lambda = l(rng);
    const double xn = x(rng);
    double prev = 1.0;
    for (double gamma = 1.05; gamma < 8.0; gamma += 0.25) {
      const double v = gamma_lambda(gamma, lambda, xn);
      ASSERT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(GammaLambdaBinary, MatchesGeneralFormulaAndIgnoresSign) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> g(1.0 + 1e-9, 10.0);
  std::uniform_real_distribution<double> l(-10.0, 10.0);
  for (int i = 0; i < 5000; ++i) {
    const double gamma = g(rng);
    const double lambda = l(rng);
    for (int x : {0, 1}) {
      const double b = gamma_lambda_binary(gamma, lambda, x);
      ASSERT_NEAR(b, gamma_lambda(gamma, lambda, x), 1e-12);
      ASSERT_NEAR(b, gamma_lambda_binary(gamma, -lambda, x), 1e-12);
    }
  }
}

TEST(GammaLambda, SignMattersForInteriorCovariate) {
  EXPECT_GT(std::abs(gamma_lambda(3.0, 0.5, 0.5) - gamma_lambda(3.0, -0.5, 0.5)), 0.1);
}

TEST(SingleInteraction, CanonicalCoefficientsReproduceBounds) {
  for (double gamma : {1.5, 2.0, 3.0}) {
    for (double lambda : {-4.0, -0.5, 0.25, 0.5, 1.0, 2.0, 8.0}) {
      const auto m = single_interaction_from(gamma, lambda);
      EXPECT_NEAR(lambda_of(m), lambda, 1e-12);
      for (double xn : {0.0, 0.3, 1.0}) {
        EXPECT_NEAR(std::exp(std::abs(m.beta_tilde * xn + m.gamma_coef)),
                    gamma_lambda(gamma, lambda, xn), 1e-12);
      }
    }
  }
  EXPECT_THROW(lambda_of({1.0, 0.0}), Error);
}

MatchedSample binary_sets() {
  return make_pairs({{1, 0, 0}, {1, 0, 1}, {0, 1, 1}, {0, 1, 0}});
}

TEST(ImpliedGamma, NoInteractionReducesToExpGamma) {
  const auto sample = binary_sets();
  const auto r = implied_gamma({{0.0}, std::log(2.0)}, sample);
  EXPECT_DOUBLE_EQ(r.gamma, 2.0);
  EXPECT_EQ(r.attaining, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(ImpliedGamma, BinaryCovariateExamples) {
  const auto sample = binary_sets();
  const auto a = implied_gamma({{1.0}, 0.5}, sample);
  EXPECT_NEAR(a.gamma, 4.4816890703380645, 1e-12);
  EXPECT_EQ(a.attaining, (std::vector<std::size_t>{1, 2}));

  const auto b = implied_gamma({{-1.0}, 1.0}, sample);
  EXPECT_NEAR(b.gamma, 2.718281828459045, 1e-12);
  EXPECT_EQ(b.attaining, (std::vector<std::size_t>{0, 3}));
}

TEST(ImpliedGamma, DimensionMismatch) {
  EXPECT_EQ(code_of([] { implied_gamma({{1.0, 2.0}, 0.0}, binary_sets()); }),
            ErrorCode::DimensionMismatch);
}

TEST(ImpliedGamma, TiesOrderedBySetId) {
  std::vector<MatchedSet> sets;
  for (const char* id : {"10", "2", "1"}) {
    sets.push_back({id, {{"t", true, 1, {1}}, {"c", false, 0, {1}}}, {}});
  }
  const MatchedSample sample(sets, {"x"}, 0, NormalizationBounds{0, 1});
  const auto r = implied_gamma({{1.0}, 0.0}, sample);
  EXPECT_EQ(r.attaining, (std::vector<std::size_t>{2, 1, 0}));
}

TEST(DiagnoseLooseness, NoInteractionNothingLoose) {
  const auto r = diagnose_looseness({{0.0}, 0.7}, binary_sets());
  EXPECT_FALSE(r.any_loose());
  for (const auto& e : r.sets) EXPECT_DOUBLE_EQ(e.upsilon, r.implied_gamma);
}

TEST(DiagnoseLooseness, NegativeInteractionLoosensTreatedLevel) {
  const auto sample = binary_sets();
  const auto r = diagnose_looseness({{-1.0}, 1.0}, sample);
  EXPECT_NEAR(r.implied_gamma, std::exp(1.0), 1e-15);
  ASSERT_EQ(r.sets.size(), 4u);
  EXPECT_FALSE(r.sets[0].is_loose);
  EXPECT_TRUE(r.sets[1].is_loose);
  EXPECT_EQ(r.sets[1].upsilon, 1.0);
  EXPECT_TRUE(r.sets[2].is_loose);
  EXPECT_FALSE(r.sets[3].is_loose);
  ASSERT_EQ(r.attaining_covariates.size(), 2u);
  EXPECT_EQ(r.attaining_covariates[0], std::vector<double>{0.0});
}

TEST(DiagnoseLooseness, CoincidenceSetHasNoLooseness) {
  const double gamma = 0.8;
  const auto r = diagnose_looseness({{-2.0 * gamma}, gamma}, binary_sets());
  EXPECT_FALSE(r.any_loose());
}

TEST(DiagnoseLooseness, UpsilonBoundsModelOddsRatios) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> cov(-1.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<MatchedSet> sets;
    for (int i = 0; i < 5; ++i) {
      const std::vector<double> x{cov(rng), cov(rng)};
      sets.push_back({std::to_string(i), {{"t", true, 1, x}, {"c", false, 0, x}}, {}});
    }
    const MatchedSample sample(sets, {"a", "b"}, 0);
    const ModelParams params{{coef(rng), coef(rng)}, coef(rng)};
    const auto r = diagnose_looseness(params, sample);
    for (std::size_t i = 0; i < sample.size(); ++i) {
      const auto& s = sample.set(i);
      double top = 0.0;
      for (double ua : {0.0, 1.0}) {
        for (double ub : {0.0, 1.0}) {
          const double odds = model_odds_ratio(params, s.units[0], ua, s.units[1], ub);
          EXPECT_LE(odds, r.sets[i].upsilon * (1 + 1e-12));
          EXPECT_GE(odds, (1 - 1e-12) / r.sets[i].upsilon);
          top = std::max(top, odds);
        }
      }
      EXPECT_NEAR(top, r.sets[i].upsilon, 1e-12 * r.sets[i].upsilon);
    }
  }
}

TEST(SetIdOrder, NumericThenLexicographic) {
  EXPECT_TRUE(set_id_less("2", "10"));
  EXPECT_FALSE(set_id_less("10", "2"));
  EXPECT_TRUE(set_id_less("9", "a"));
  EXPECT_TRUE(set_id_less("a", "b"));
}

}  // namespace
}  // namespace sharpsens
