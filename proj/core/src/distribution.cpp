#include "sharpsens/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "sharpsens/bounds.hpp"
#include "sharpsens/error.hpp"

namespace sharpsens {

std::optional<int> lattice_scale(std::span<const double> weights) {
  for (int s : {1, 2}) {
    const bool ok = std::all_of(weights.begin(), weights.end(), [s](double d) {
      const double v = d * s;
      return std::isfinite(v) && std::nearbyint(v) == v;
    });
    if (ok) return s;
  }
  return std::nullopt;
}

double WorstCaseDistribution::upper_tail(double t) const {
  if (!approximate) {
    const double scaled = t * scale;
    const double first = std::ceil(scaled - 1e-9);
    if (first <= 0.0) return 1.0;
    if (first >= static_cast<double>(mass.size())) return 0.0;
    // Smallest terms first.
    double p = 0.0;
    for (std::size_t k = mass.size(); k-- > static_cast<std::size_t>(first);) p += mass[k];
    return std::clamp(p, 0.0, 1.0);
  }
  const double step = scale > 0 ? 1.0 / scale : 1.0;
  const double cut = continuity_correction ? t - 0.5 * step : t;
  if (variance <= 0.0) return mean >= cut - 1e-12 ? 1.0 : 0.0;
  const double z = (cut - mean) / std::sqrt(variance);
  return std::clamp(0.5 * std::erfc(z / std::sqrt(2.0)), 0.0, 1.0);
}

WorstCaseDistribution weighted_bernoulli_sum(std::span<const double> weights,
                                             std::span<const double> probabilities,
                                             const TailOptions& options) {
  if (weights.size() != probabilities.size()) {
    throw Error(ErrorCode::DimensionMismatch, "weights and probabilities differ in length");
  }
  WorstCaseDistribution dist;
  dist.weights.assign(weights.begin(), weights.end());
  dist.probabilities.assign(probabilities.begin(), probabilities.end());
  dist.continuity_correction = options.continuity_correction;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double p = probabilities[i];
    dist.mean += weights[i] * p;
    dist.variance += weights[i] * weights[i] * p * (1.0 - p);
  }

  const auto scale = lattice_scale(weights);
  dist.scale = scale.value_or(0);
  double support = 0.0;
  if (scale) {
    for (double d : weights) support += d * *scale;
  }
  const bool lattice_ok =
      scale && support < static_cast<double>(options.max_support);

  if (options.mode == TailMode::Approximate || (!lattice_ok && options.mode == TailMode::Auto)) {
    dist.approximate = true;
    return dist;
  }
  if (!lattice_ok) {
    throw Error(ErrorCode::NonLatticeWeights,
                scale ? "lattice support too large for exact convolution"
                      : "weights are not integer or half-integer; exact tail unavailable");
  }

  const int s = *scale;
  dist.mass.assign(static_cast<std::size_t>(support) + 1, 0.0);
  dist.mass[0] = 1.0;
  std::size_t top = 0;  // highest index with possibly nonzero mass
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto w = static_cast<std::size_t>(std::llround(weights[i] * s));
    const double p = probabilities[i];
    if (w == 0 || p == 0.0) continue;
    if (p == 1.0) {
      for (std::size_t k = top + 1; k-- > 0;) {
        dist.mass[k + w] = dist.mass[k];
        dist.mass[k] = 0.0;
      }
    } else {
      for (std::size_t k = top + 1; k-- > 0;) {
        dist.mass[k + w] += dist.mass[k] * p;
        dist.mass[k] *= 1.0 - p;
      }
    }
    top += w;
  }
  return dist;
}

std::vector<double> per_set_gamma(const SensitivityParams& params, const MatchedSample& sample) {
  check_params(params);
  std::vector<double> out(sample.size(), params.gamma);
  if (params.gamma == 1.0 || params.lambda == 1.0) return out;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    out[i] = gamma_lambda(params.gamma, params.lambda, normalize_covariate(sample, i));
  }
  return out;
}

WorstCaseDistribution worst_case_distribution(const SignScoreStatistic& stat,
                                              const SensitivityParams& params,
                                              const MatchedSample& sample,
                                              const TailOptions& options) {
  require_paired(sample);
  if (stat.pairs.size() != sample.size()) {
    throw Error(ErrorCode::DimensionMismatch, "statistic and sample disagree on the number of pairs");
  }
  const auto gammas = per_set_gamma(params, sample);
  std::vector<double> d;
  std::vector<double> p;
  d.reserve(stat.pairs.size());
  p.reserve(stat.pairs.size());
  for (std::size_t i = 0; i < stat.pairs.size(); ++i) {
    const auto& pair = stat.pairs[i];
    d.push_back(pair.d);
    if (pair.discordant()) {
      p.push_back(gammas[i] / (1.0 + gammas[i]));
    } else {
      p.push_back(pair.c[0] == 1 ? 1.0 : 0.0);
    }
  }
  return weighted_bernoulli_sum(d, p, options);
}

}  // namespace sharpsens
