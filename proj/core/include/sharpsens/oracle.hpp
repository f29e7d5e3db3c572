#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sharpsens/bounds.hpp"
#include "sharpsens/model.hpp"
#include "sharpsens/statistic.hpp"

namespace sharpsens {

inline constexpr std::size_t kMaxOraclePairs = 8;

struct BruteForceResult {
  double p_value = 0.0;               // max over vertex confounders u
  std::vector<std::uint8_t> argmax_u;  // 2 entries per pair, unit order
  double extremal_p_value = 0.0;       // tail at u_ij = c_ij (flipped when the slope is negative)
  std::size_t confounders_examined = 0;
};

/// Exact tail pr(T >= t) for a fixed confounder u under the single-interaction
/// logit model with g = 0, by enumerating all 2^I treatment assignments.
double tail_given_confounder(const SignScoreStatistic& stat, const SingleInteraction& model,
                             const MatchedSample& sample, const std::vector<std::uint8_t>& u);

/// Maximum of tail_given_confounder() over u in {0,1}^{2I}, with (Gamma,
/// lambda) mapped to model coefficients by single_interaction_from(). Vertex
/// confounders that give a pair the same within-pair probability (u_i1 == u_i2)
/// are visited once. Throws TooLarge for more than kMaxOraclePairs pairs.
BruteForceResult brute_force_worst_case(const SignScoreStatistic& stat,
                                        const SensitivityParams& params,
                                        const MatchedSample& sample);

/// Same, for explicit model coefficients.
BruteForceResult brute_force_worst_case(const SignScoreStatistic& stat,
                                        const SingleInteraction& model,
                                        const MatchedSample& sample);

/// Odds ratio pi_ij (1 - pi_ij') / (pi_ij' (1 - pi_ij)) under the general
/// interaction model with g = 0, using each unit's own covariates.
double model_odds_ratio(const ModelParams& params, const Unit& a, double u_a, const Unit& b,
                        double u_b);

}  // namespace sharpsens
