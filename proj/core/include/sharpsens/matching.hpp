#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sharpsens/model.hpp"

namespace sharpsens {

/// Unmatched treated and control units before pairing.
struct Cohort {
  std::vector<Unit> units;
  std::vector<std::string> covariate_names;
  std::vector<std::size_t> exact_match_indices;
  std::vector<double> scaling;  // pooled SD per covariate, sqrt((s_T^2 + s_C^2) / 2)
};

/// Builds a cohort and its pooled standard deviations. Throws SchemaError for
/// covariate vectors of the wrong length or out-of-range exact-match indices.
Cohort make_cohort(std::vector<Unit> units, std::vector<std::string> covariate_names,
                   std::vector<std::size_t> exact_match_indices);

enum class DistanceKind { Mahalanobis, StandardizedEuclidean };

std::string to_string(DistanceKind kind);
DistanceKind distance_kind_from_string(const std::string& name);

struct MatchOptions {
  DistanceKind distance = DistanceKind::Mahalanobis;
  // Add 1e-8 * trace / K to a near-singular covariance instead of failing.
  bool regularize = true;
};

struct MatchResult {
  MatchedSample sample;
  double total_cost = 0.0;
  // (treated, control) indices into cohort.units, ordered by treated id.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  bool ridge_applied = false;
};

/// Optimal pair matching: minimum total distance over all treated-to-control
/// assignments, with any pair that disagrees on an exact-match covariate (the
/// interaction covariate always included) forbidden.
///
/// Units are ordered by id before solving, so equal-cost alternatives resolve
/// the same way on every run. Pairs become sets "1", "2", ... in treated-id
/// order. Throws InfeasibleExactMatch naming the treated units that cannot be
/// matched and SingularCovariance when regularization is disabled.
MatchResult optimal_pair_match(const Cohort& cohort, std::size_t interaction_index,
                               const MatchOptions& options = {});

/// Pairwise distances (treated rows, control columns) used by the matcher.
struct DistanceMatrix {
  std::vector<std::size_t> treated;
  std::vector<std::size_t> controls;
  std::vector<std::vector<double>> values;
  bool ridge_applied = false;
};

DistanceMatrix distance_matrix(const Cohort& cohort, const MatchOptions& options = {});

struct CovariateBalance {
  std::string name;
  double mean_treated = 0.0;
  double mean_control = 0.0;
  double pooled_sd = 0.0;
  double std_diff_before = 0.0;  // in the unmatched cohort
  double std_diff = 0.0;         // after matching
  double within_pair_correlation = 1.0;
  double max_within_set_deviation = 0.0;
  bool exactly_matched = false;
  bool exceeds_threshold = false;
};

struct BalanceReport {
  std::vector<CovariateBalance> covariates;
  double threshold = 0.1;
  std::size_t interaction_index = 0;
  bool interaction_matched = true;

  bool passes() const noexcept;
};

/// Absolute standardized differences (pooled SD from the cohort) and
/// correlations between treated and control covariate values across sets.
BalanceReport balance_diagnostics(const MatchedSample& sample, const Cohort& cohort,
                                  double threshold = 0.1);

}  // namespace sharpsens
