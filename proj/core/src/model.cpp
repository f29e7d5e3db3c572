#include "sharpsens/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "sharpsens/error.hpp"

namespace sharpsens {
namespace {

void fill_common_covariates(std::vector<MatchedSet>& sets, std::size_t k_count) {
  for (auto& set : sets) {
    set.common_covariates.assign(k_count, 0.0);
    const bool shaped = !set.units.empty() &&
                        std::all_of(set.units.begin(), set.units.end(), [&](const Unit& u) {
                          return u.covariates.size() == k_count;
                        });
    if (!shaped) {
      std::fill(set.common_covariates.begin(), set.common_covariates.end(),
                std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    for (std::size_t k = 0; k < k_count; ++k) {
      // A constant column must come back bit-identical, not as a rounded mean.
      const double first = set.units.front().covariates[k];
      const bool constant = std::all_of(set.units.begin(), set.units.end(),
                                        [&](const Unit& u) { return u.covariates[k] == first; });
      if (constant) {
        set.common_covariates[k] = first;
        continue;
      }
      double sum = 0.0;
      for (const auto& u : set.units) sum += u.covariates[k];
      set.common_covariates[k] = sum / static_cast<double>(set.units.size());
    }
  }
}

NormalizationBounds observed_bounds(const std::vector<MatchedSet>& sets, std::size_t k) {
  NormalizationBounds b{std::numeric_limits<double>::infinity(),
                        -std::numeric_limits<double>::infinity()};
  for (const auto& set : sets) {
    for (const auto& u : set.units) {
      if (k >= u.covariates.size()) continue;
      b.min = std::min(b.min, u.covariates[k]);
      b.max = std::max(b.max, u.covariates[k]);
    }
  }
  return b;
}

}  // namespace

MatchedSample::MatchedSample(std::vector<MatchedSet> sets,
                             std::vector<std::string> covariate_names,
                             std::size_t interaction_index)
    : sets_(std::move(sets)),
      covariate_names_(std::move(covariate_names)),
      interaction_index_(interaction_index) {
  fill_common_covariates(sets_, covariate_names_.size());
  bounds_ = observed_bounds(sets_, interaction_index_);
}

MatchedSample::MatchedSample(std::vector<MatchedSet> sets,
                             std::vector<std::string> covariate_names,
                             std::size_t interaction_index, NormalizationBounds bounds)
    : sets_(std::move(sets)),
      covariate_names_(std::move(covariate_names)),
      interaction_index_(interaction_index),
      bounds_(bounds) {
  fill_common_covariates(sets_, covariate_names_.size());
}

bool MatchedSample::is_paired() const noexcept {
  return std::all_of(sets_.begin(), sets_.end(),
                     [](const MatchedSet& s) { return s.units.size() == 2; });
}

double MatchedSample::within_set_deviation(std::size_t i, std::size_t k) const {
  const auto& s = sets_.at(i);
  double dev = 0.0;
  for (const auto& u : s.units) {
    dev = std::max(dev, std::abs(u.covariates.at(k) - s.common_covariates.at(k)));
  }
  return dev;
}

void check_params(const SensitivityParams& params) {
  if (!(params.gamma >= 1.0) || !std::isfinite(params.gamma)) {
    throw Error(ErrorCode::InvalidGamma,
                "gamma must be a finite value >= 1, got " + std::to_string(params.gamma));
  }
  if (!std::isfinite(params.lambda)) {
    throw Error(ErrorCode::NonFiniteLambda, "lambda must be finite");
  }
}

double normalize_covariate(const MatchedSample& sample, std::size_t i) {
  const auto& b = sample.normalization_bounds();
  if (b.degenerate()) {
    throw Error(ErrorCode::DegenerateCovariate,
                "interaction covariate has no spread (max == min); cannot normalize");
  }
  const double x = sample.set(i).common_covariates.at(sample.interaction_index());
  return (x - b.min) / (b.max - b.min);
}

ValidationReport validate_sample(const MatchedSample& sample) {
  ValidationReport report;
  auto add = [&](std::string set_id, ViolationKind kind, std::string msg) {
    report.violations.push_back({std::move(set_id), kind, std::move(msg)});
  };

  const std::size_t k_count = sample.covariate_count();
  const std::size_t k = sample.interaction_index();
  const bool k_ok = k < k_count;
  if (!k_ok) {
    add("", ViolationKind::InteractionIndexOutOfRange,
        "interaction covariate index " + std::to_string(k) + " out of range for " +
            std::to_string(k_count) + " covariates");
  }
  const auto& b = sample.normalization_bounds();
  if (b.degenerate()) {
    add("", ViolationKind::DegenerateInteraction,
        "interaction covariate is degenerate (min >= max)");
  }

  for (const auto& set : sample.sets()) {
    std::size_t treated = 0;
    for (const auto& u : set.units) treated += u.treated ? 1 : 0;
    if (treated != 1) {
      add(set.id, ViolationKind::TreatedCount,
          "Σ Z ≠ 1 (" + std::to_string(treated) + " treated units)");
    }
    if (set.units.size() < 2) {
      add(set.id, ViolationKind::TooFewUnits,
          "set has " + std::to_string(set.units.size()) + " unit(s); at least 2 required");
    }
    bool shaped = true;
    for (const auto& u : set.units) {
      if (u.covariates.size() != k_count) {
        shaped = false;
        add(set.id, ViolationKind::CovariateDimension,
            "unit " + u.id + " has " + std::to_string(u.covariates.size()) +
                " covariates, expected " + std::to_string(k_count));
      }
    }
    if (!shaped || !k_ok || set.units.empty()) continue;

    const double x = set.units.front().covariates[k];
    const bool matched = std::all_of(set.units.begin(), set.units.end(),
                                     [&](const Unit& u) { return u.covariates[k] == x; });
    if (!matched) {
      add(set.id, ViolationKind::InteractionNotMatched, "interaction covariate not matched");
    } else if (!b.degenerate() && (x < b.min || x > b.max)) {
      add(set.id, ViolationKind::OutsideNormalization,
          "interaction covariate outside the normalization bounds");
    }
  }
  return report;
}

void require_valid(const MatchedSample& sample) {
  const auto report = validate_sample(sample);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    std::string where = v.set_id.empty() ? std::string("sample") : "set " + v.set_id;
    throw Error(ErrorCode::InvalidSample, where + ": " + v.message);
  }
}

}  // namespace sharpsens
