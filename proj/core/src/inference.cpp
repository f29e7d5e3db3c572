#include "sharpsens/inference.hpp"

#include <algorithm>
#include <cmath>

#include "sharpsens/error.hpp"

namespace sharpsens {

double worst_case_p_value(const SignScoreStatistic& stat, const SensitivityParams& params,
                          const MatchedSample& sample, const TailOptions& options) {
  return worst_case_distribution(stat, params, sample, options).upper_tail(stat.observed);
}

double randomization_p_value(const SignScoreStatistic& stat, const MatchedSample& sample) {
  require_paired(sample);
  if (stat.pairs.size() != sample.size()) {
    throw Error(ErrorCode::DimensionMismatch, "statistic and sample disagree on the number of pairs");
  }
  // Fraction of the 2^I equally likely assignments with T >= t, built up one
  // pair at a time: a pair either adds d * c[0] or d * c[1], each half the time.
  std::vector<double> weights;
  for (const auto& p : stat.pairs) weights.push_back(p.d);
  const auto scale = lattice_scale(weights);
  if (!scale) {
    throw Error(ErrorCode::NonLatticeWeights, "randomization distribution needs lattice weights");
  }
  const int s = *scale;
  std::size_t support = 0;
  for (double d : weights) support += static_cast<std::size_t>(std::llround(d * s));
  std::vector<double> frac(support + 1, 0.0);
  frac[0] = 1.0;
  std::size_t top = 0;
  for (const auto& p : stat.pairs) {
    const auto w = static_cast<std::size_t>(std::llround(p.d * s));
    const std::size_t a = w * p.c[0];
    const std::size_t b = w * p.c[1];
    if (w == 0) continue;
    std::vector<double> next(frac.size(), 0.0);
    for (std::size_t k = 0; k <= top; ++k) {
      if (frac[k] == 0.0) continue;
      next[k + a] += 0.5 * frac[k];
      next[k + b] += 0.5 * frac[k];
    }
    frac.swap(next);
    top += std::max(a, b);
  }
  const double first = std::ceil(stat.observed * s - 1e-9);
  if (first <= 0.0) return 1.0;
  double p = 0.0;
  for (std::size_t k = frac.size(); k-- > 0;) {
    if (static_cast<double>(k) < first) break;
    p += frac[k];
  }
  return std::clamp(p, 0.0, 1.0);
}

SensitivityValue sensitivity_value(const SignScoreStatistic& stat, double lambda,
                                   const MatchedSample& sample, double alpha,
                                   const SearchOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, "alpha must lie in (0, 1)");
  }
  if (!(options.gamma_max > 1.0) || !std::isfinite(options.gamma_max) || !(options.tol > 0.0)) {
    throw Error(ErrorCode::InvalidBracket, "need gamma_max > 1 and tol > 0");
  }
  auto p_at = [&](double gamma) {
    return worst_case_p_value(stat, {gamma, lambda}, sample, options.tail);
  };
  if (p_at(1.0) > alpha) return {SensitivityValue::Kind::AtMostOne, 1.0};
  if (p_at(options.gamma_max) <= alpha) {
    return {SensitivityValue::Kind::AtLeastMax, options.gamma_max};
  }
  double lo = 1.0;                // p(lo) <= alpha
  double hi = options.gamma_max;  // p(hi) > alpha
  while (hi - lo > options.tol) {
    const double mid = 0.5 * (lo + hi);
    if (p_at(mid) <= alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {SensitivityValue::Kind::Interior, lo};
}

SensitivityReport p_value_grid(const SignScoreStatistic& stat, const MatchedSample& sample,
                               std::vector<double> gamma_grid, std::vector<double> lambda_grid,
                               double alpha, const SearchOptions& options) {
  if (gamma_grid.empty() || lambda_grid.empty()) {
    throw Error(ErrorCode::ConfigError, "gamma and lambda grids must be nonempty");
  }
  for (double g : gamma_grid) {
    if (!(g >= 1.0) || !std::isfinite(g)) {
      throw Error(ErrorCode::InvalidGamma, "gamma grid values must be finite and >= 1");
    }
  }
  for (double l : lambda_grid) {
    if (!std::isfinite(l)) throw Error(ErrorCode::NonFiniteLambda, "lambda grid values must be finite");
  }
  std::sort(gamma_grid.begin(), gamma_grid.end());
  gamma_grid.erase(std::unique(gamma_grid.begin(), gamma_grid.end()), gamma_grid.end());

  SensitivityReport report;
  report.gamma_grid = std::move(gamma_grid);
  report.lambda_grid = std::move(lambda_grid);
  report.alpha = alpha;
  report.statistic_name = to_string(stat.kind);
  report.observed = stat.observed;
  report.mode = options.tail.mode;
  report.p_values.assign(report.gamma_grid.size(),
                         std::vector<double>(report.lambda_grid.size(), 0.0));

  for (std::size_t g = 0; g < report.gamma_grid.size(); ++g) {
    for (std::size_t l = 0; l < report.lambda_grid.size(); ++l) {
      const auto dist = worst_case_distribution(
          stat, {report.gamma_grid[g], report.lambda_grid[l]}, sample, options.tail);
      report.approximate = report.approximate || dist.approximate;
      report.p_values[g][l] = dist.upper_tail(stat.observed);
    }
  }
  for (double lambda : report.lambda_grid) {
    report.sensitivity_values.push_back(sensitivity_value(stat, lambda, sample, alpha, options));
  }
  return report;
}

}  // namespace sharpsens
