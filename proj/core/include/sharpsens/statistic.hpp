#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sharpsens/model.hpp"

namespace sharpsens {

enum class StatisticKind { McNemar, WilcoxonSignedRank, Custom };

std::string to_string(StatisticKind kind);
StatisticKind statistic_kind_from_string(const std::string& name);

/// One pair's contribution d * (c[0] Z_0 + c[1] Z_1). Unit order follows the
/// sample's unit order within the set.
struct PairScore {
  double d = 0.0;
  std::array<std::uint8_t, 2> c{0, 0};
  std::size_t treated = 0;

  bool discordant() const noexcept { return c[0] != c[1]; }
};

struct SignScoreStatistic {
  StatisticKind kind = StatisticKind::Custom;
  std::vector<PairScore> pairs;
  double observed = 0.0;
};

/// McNemar (d = 1, c = R) or Wilcoxon signed rank (d = average rank of
/// |R_treated - R_control| among nonzero differences, c marks the unit the
/// difference favors). Throws UnpairedSample, NonBinaryOutcome.
SignScoreStatistic build_statistic(const MatchedSample& sample, StatisticKind kind);

/// Caller-supplied scores. Requires d_i >= 0 and c_ij in {0, 1}.
SignScoreStatistic build_statistic(const MatchedSample& sample, const std::vector<double>& d,
                                   const std::vector<std::array<std::uint8_t, 2>>& c);

/// Throws UnpairedSample unless every set has exactly two units and the sample
/// otherwise validates.
void require_paired(const MatchedSample& sample);

}  // namespace sharpsens
