#include "sharpsens/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "sharpsens/error.hpp"

namespace sharpsens {
namespace {

double logistic(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

// P(unit 0 is the treated one | exactly one treated) for a pair with slope
// theta on u.
double first_unit_probability(double theta, std::uint8_t u0, std::uint8_t u1) {
  const double p0 = logistic(theta * u0);
  const double p1 = logistic(theta * u1);
  const double a = p0 * (1.0 - p1);
  const double b = p1 * (1.0 - p0);
  return a / (a + b);
}

std::vector<double> slopes(const SingleInteraction& model, const MatchedSample& sample) {
  std::vector<double> theta(sample.size());
  const bool need_x = model.beta_tilde != 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double x = need_x ? normalize_covariate(sample, i) : 0.0;
    theta[i] = model.beta_tilde * x + model.gamma_coef;
  }
  return theta;
}

// Sum over all 2^I assignments of prod(prob) * 1{T >= t}, walked depth-first
// so each partial product is formed once.
void accumulate_tail(const SignScoreStatistic& stat, const std::vector<double>& q, std::size_t i,
                     double prob, double t, double cut, double& total) {
  if (i == q.size()) {
    if (t >= cut) total += prob;
    return;
  }
  const auto& pair = stat.pairs[i];
  accumulate_tail(stat, q, i + 1, prob * q[i], t + pair.d * pair.c[0], cut, total);
  accumulate_tail(stat, q, i + 1, prob * (1.0 - q[i]), t + pair.d * pair.c[1], cut, total);
}

double enumerate_tail(const SignScoreStatistic& stat, const std::vector<double>& q) {
  double total = 0.0;
  accumulate_tail(stat, q, 0, 1.0, 0.0, stat.observed - 1e-9, total);
  return total;
}

void check_size(const SignScoreStatistic& stat, const MatchedSample& sample) {
  require_paired(sample);
  if (stat.pairs.size() != sample.size()) {
    throw Error(ErrorCode::DimensionMismatch, "statistic and sample disagree on the number of pairs");
  }
  if (sample.size() > kMaxOraclePairs) {
    throw Error(ErrorCode::TooLarge, "brute-force oracle is limited to " +
                                         std::to_string(kMaxOraclePairs) + " pairs");
  }
}

}  // namespace

double tail_given_confounder(const SignScoreStatistic& stat, const SingleInteraction& model,
                             const MatchedSample& sample, const std::vector<std::uint8_t>& u) {
  check_size(stat, sample);
  if (u.size() != 2 * sample.size()) {
    throw Error(ErrorCode::DimensionMismatch, "confounder vector needs two entries per pair");
  }
  const auto theta = slopes(model, sample);
  std::vector<double> q(sample.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = first_unit_probability(theta[i], u[2 * i], u[2 * i + 1]);
  }
  return enumerate_tail(stat, q);
}

BruteForceResult brute_force_worst_case(const SignScoreStatistic& stat,
                                        const SensitivityParams& params,
                                        const MatchedSample& sample) {
  check_params(params);
  return brute_force_worst_case(stat, single_interaction_from(params.gamma, params.lambda), sample);
}

BruteForceResult brute_force_worst_case(const SignScoreStatistic& stat,
                                        const SingleInteraction& model,
                                        const MatchedSample& sample) {
  check_size(stat, sample);
  const std::size_t n = sample.size();
  const auto theta = slopes(model, sample);

  // Distinct within-pair probabilities over the four vertex choices of
  // (u_i1, u_i2), each with one representative u.
  struct Choice {
    double q;
    std::uint8_t u0, u1;
  };
  std::vector<std::vector<Choice>> choices(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint8_t u0 = 0; u0 < 2; ++u0) {
      for (std::uint8_t u1 = 0; u1 < 2; ++u1) {
        const double q = first_unit_probability(theta[i], u0, u1);
        const bool seen = std::any_of(choices[i].begin(), choices[i].end(),
                                      [&](const Choice& c) { return c.q == q; });
        if (!seen) choices[i].push_back({q, u0, u1});
      }
    }
  }

  BruteForceResult result;
  result.p_value = -1.0;
  std::vector<std::size_t> odometer(n, 0);
  std::vector<double> q(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) q[i] = choices[i][odometer[i]].q;
    const double p = enumerate_tail(stat, q);
    ++result.confounders_examined;
    if (p > result.p_value) {
      result.p_value = p;
      result.argmax_u.assign(2 * n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        result.argmax_u[2 * i] = choices[i][odometer[i]].u0;
        result.argmax_u[2 * i + 1] = choices[i][odometer[i]].u1;
      }
    }
    std::size_t i = 0;
    while (i < n && ++odometer[i] == choices[i].size()) odometer[i++] = 0;
    if (i == n) break;
  }

  std::vector<double> extremal(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto c = stat.pairs[i].c;
    if (theta[i] < 0.0) {
      c[0] = 1 - c[0];
      c[1] = 1 - c[1];
    }
    extremal[i] = first_unit_probability(theta[i], c[0], c[1]);
  }
  result.extremal_p_value = enumerate_tail(stat, extremal);
  return result;
}

double model_odds_ratio(const ModelParams& params, const Unit& a, double u_a, const Unit& b,
                        double u_b) {
  if (a.covariates.size() != params.beta.size() || b.covariates.size() != params.beta.size()) {
    throw Error(ErrorCode::DimensionMismatch, "unit covariates do not match beta");
  }
  double slope_a = params.gamma_coef;
  double slope_b = params.gamma_coef;
  for (std::size_t k = 0; k < params.beta.size(); ++k) {
    slope_a += params.beta[k] * a.covariates[k];
    slope_b += params.beta[k] * b.covariates[k];
  }
  const double pa = logistic(slope_a * u_a);
  const double pb = logistic(slope_b * u_b);
  return pa * (1.0 - pb) / (pb * (1.0 - pa));
}

}  // namespace sharpsens
