#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sharpsens {

struct Unit {
  std::string id;
  bool treated = false;
  double outcome = 0.0;
  std::vector<double> covariates;
};

struct MatchedSet {
  std::string id;
  std::vector<Unit> units;
  // Within-set means, filled in by MatchedSample. For exactly matched
  // covariates this is the shared value.
  std::vector<double> common_covariates;
};

struct NormalizationBounds {
  double min = 0.0;
  double max = 0.0;

  bool degenerate() const noexcept { return !(min < max); }
};

/// An immutable collection of matched sets with one covariate singled out as
/// the one allowed to interact with the unobserved confounder.
///
/// The normalization bounds of the interaction covariate are frozen when the
/// sample is built, either from the observed min/max over all units or from
/// caller-supplied bounds. Structural problems (two treated units in a set,
/// a set of size one, ...) do not throw here; use validate_sample().
class MatchedSample {
 public:
  MatchedSample(std::vector<MatchedSet> sets,
                std::vector<std::string> covariate_names,
                std::size_t interaction_index);

  MatchedSample(std::vector<MatchedSet> sets,
                std::vector<std::string> covariate_names,
                std::size_t interaction_index, NormalizationBounds bounds);

  const std::vector<MatchedSet>& sets() const noexcept { return sets_; }
  const MatchedSet& set(std::size_t i) const { return sets_.at(i); }
  std::size_t size() const noexcept { return sets_.size(); }

  const std::vector<std::string>& covariate_names() const noexcept {
    return covariate_names_;
  }
  std::size_t covariate_count() const noexcept {
    return covariate_names_.size();
  }
  std::size_t interaction_index() const noexcept { return interaction_index_; }
  const NormalizationBounds& normalization_bounds() const noexcept {
    return bounds_;
  }

  bool is_paired() const noexcept;

  /// Largest |x_ij(k) - x_i(k)| over the units of set i.
  double within_set_deviation(std::size_t i, std::size_t k) const;

 private:
  std::vector<MatchedSet> sets_;
  std::vector<std::string> covariate_names_;
  std::size_t interaction_index_;
  NormalizationBounds bounds_;
};

/// The pair (Gamma, lambda). The interaction covariate is carried by the
/// sample being analysed.
struct SensitivityParams {
  double gamma = 1.0;
  double lambda = 1.0;
};

/// Throws InvalidGamma / NonFiniteLambda.
void check_params(const SensitivityParams& params);

/// Interaction covariate of set i mapped affinely onto [0, 1] with the
/// sample's frozen bounds. Throws DegenerateCovariate when max == min.
double normalize_covariate(const MatchedSample& sample, std::size_t i);

enum class ViolationKind {
  TreatedCount,
  TooFewUnits,
  CovariateDimension,
  InteractionIndexOutOfRange,
  InteractionNotMatched,
  DegenerateInteraction,
  OutsideNormalization,
};

struct Violation {
  std::string set_id;  // empty for sample-level violations
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_sample(const MatchedSample& sample);

/// Throws InvalidSample carrying the first violation when the sample fails
/// validate_sample().
void require_valid(const MatchedSample& sample);

}  // namespace sharpsens
