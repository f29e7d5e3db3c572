#pragma once

#include <string>
#include <vector>

#include "sharpsens/distribution.hpp"
#include "sharpsens/model.hpp"
#include "sharpsens/statistic.hpp"

namespace sharpsens {

/// Worst-case one-sided p-value pr(sum_i T~_i >= t) at the observed t.
double worst_case_p_value(const SignScoreStatistic& stat, const SensitivityParams& params,
                          const MatchedSample& sample, const TailOptions& options = {});

/// Exact p-value under uniform randomization within pairs.
double randomization_p_value(const SignScoreStatistic& stat, const MatchedSample& sample);

struct SensitivityValue {
  enum class Kind {
    Interior,    // gamma holds the changepoint
    AtMostOne,   // p(1) > alpha: no tolerance for hidden bias
    AtLeastMax,  // still rejecting at gamma_max
  };
  Kind kind = Kind::Interior;
  double gamma = 1.0;
};

struct SearchOptions {
  double gamma_max = 100.0;
  double tol = 1e-4;
  TailOptions tail{};
};

/// sup{Gamma in [1, gamma_max] : p(Gamma, lambda) <= alpha} by bisection.
/// The returned gamma satisfies p(gamma) <= alpha and the bracket width is at
/// most tol.
SensitivityValue sensitivity_value(const SignScoreStatistic& stat, double lambda,
                                   const MatchedSample& sample, double alpha,
                                   const SearchOptions& options = {});

struct SensitivityReport {
  std::vector<double> gamma_grid;
  std::vector<double> lambda_grid;
  // p_values[g][l] for gamma_grid[g], lambda_grid[l].
  std::vector<std::vector<double>> p_values;
  std::vector<SensitivityValue> sensitivity_values;  // one per lambda
  double alpha = 0.05;
  std::string statistic_name;
  double observed = 0.0;
  bool approximate = false;
  TailMode mode = TailMode::Auto;
  int rounding = 2;
};

/// Gamma grid is sorted ascending (duplicates removed); lambda order is kept.
SensitivityReport p_value_grid(const SignScoreStatistic& stat, const MatchedSample& sample,
                               std::vector<double> gamma_grid, std::vector<double> lambda_grid,
                               double alpha, const SearchOptions& options = {});

}  // namespace sharpsens
