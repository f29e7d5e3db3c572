#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sharpsens/model.hpp"
#include "sharpsens/statistic.hpp"

namespace sharpsens {

enum class TailMode {
  Auto,         // exact on a lattice, Gaussian otherwise (flagged)
  Exact,        // NonLatticeWeights when the weights are off-lattice
  Approximate,  // always Gaussian
};

struct TailOptions {
  TailMode mode = TailMode::Auto;
  bool continuity_correction = false;
  std::size_t max_support = 50'000'000;
};

/// Distribution of sum_i d_i B_i with independent B_i ~ Bernoulli(p_i).
///
/// When every s * d_i is an integer for s in {1, 2}, mass[k] holds
/// P(sum = k / s) exactly (up to rounding of the convolution). Otherwise only
/// mean and variance are kept and tails use the normal approximation.
struct WorstCaseDistribution {
  std::vector<double> probabilities;
  std::vector<double> weights;
  int scale = 0;  // 0 when the weights are not lattice-representable
  std::vector<double> mass;
  bool approximate = false;
  bool continuity_correction = false;
  double mean = 0.0;
  double variance = 0.0;

  /// P(sum >= t), inclusive of t.
  double upper_tail(double t) const;
};

/// Smallest s in {1, 2} making every s * d_i integral.
std::optional<int> lattice_scale(std::span<const double> weights);

WorstCaseDistribution weighted_bernoulli_sum(std::span<const double> weights,
                                             std::span<const double> probabilities,
                                             const TailOptions& options = {});

/// Per-pair Gamma_{lambda,i}; identically 1 when gamma == 1 and identically
/// gamma when lambda == 1 (no normalization needed in either case).
std::vector<double> per_set_gamma(const SensitivityParams& params, const MatchedSample& sample);

/// Bounding distribution: p_i = 0 / 1 for concordant pairs, and
/// Gamma_{lambda,i} / (1 + Gamma_{lambda,i}) for discordant ones.
WorstCaseDistribution worst_case_distribution(const SignScoreStatistic& stat,
                                              const SensitivityParams& params,
                                              const MatchedSample& sample,
                                              const TailOptions& options = {});

}  // namespace sharpsens
