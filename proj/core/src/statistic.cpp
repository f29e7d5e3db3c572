#include "sharpsens/statistic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sharpsens/error.hpp"

namespace sharpsens {
namespace {

std::size_t treated_index(const MatchedSet& set) {
  return set.units[0].treated ? 0 : 1;
}

double observed_value(const std::vector<PairScore>& pairs) {
  double t = 0.0;
  for (const auto& p : pairs) t += p.d * p.c[p.treated];
  return t;
}

// Average ranks (1-based) of the values; ties share the mean of their ranks.
std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t r = i; r <= j; ++r) ranks[order[r]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::string to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::McNemar: return "mcnemar";
    case StatisticKind::WilcoxonSignedRank: return "wilcoxon-signed-rank";
    case StatisticKind::Custom: return "custom";
  }
  return "custom";
}

StatisticKind statistic_kind_from_string(const std::string& name) {
  if (name == "mcnemar") return StatisticKind::McNemar;
  if (name == "wilcoxon" || name == "wilcoxon-signed-rank") return StatisticKind::WilcoxonSignedRank;
  if (name == "custom") return StatisticKind::Custom;
  throw Error(ErrorCode::ConfigError, "unknown statistic '" + name + "'");
}

void require_paired(const MatchedSample& sample) {
  if (!sample.is_paired()) {
    throw Error(ErrorCode::UnpairedSample, "sign-score statistics require exactly two units per set");
  }
  require_valid(sample);
}

SignScoreStatistic build_statistic(const MatchedSample& sample, StatisticKind kind) {
  require_paired(sample);
  SignScoreStatistic stat;
  stat.kind = kind;
  stat.pairs.reserve(sample.size());

  switch (kind) {
    case StatisticKind::McNemar:
      for (const auto& set : sample.sets()) {
        PairScore p;
        p.d = 1.0;
        p.treated = treated_index(set);
        for (std::size_t j = 0; j < 2; ++j) {
          const double r = set.units[j].outcome;
          if (r != 0.0 && r != 1.0) {
            throw Error(ErrorCode::NonBinaryOutcome,
                        "McNemar requires binary outcomes; unit " + set.units[j].id + " has " +
                            std::to_string(r));
          }
          p.c[j] = r == 1.0 ? 1 : 0;
        }
        stat.pairs.push_back(p);
      }
      break;

    case StatisticKind::WilcoxonSignedRank: {
      std::vector<double> diff;
      diff.reserve(sample.size());
      for (const auto& set : sample.sets()) {
        const std::size_t t = treated_index(set);
        diff.push_back(set.units[t].outcome - set.units[1 - t].outcome);
      }
      std::vector<double> magnitudes;
      std::vector<std::size_t> nonzero;
      for (std::size_t i = 0; i < diff.size(); ++i) {
        if (diff[i] != 0.0) {
          nonzero.push_back(i);
          magnitudes.push_back(std::abs(diff[i]));
        }
      }
      const auto ranks = average_ranks(magnitudes);
      std::vector<double> d(diff.size(), 0.0);
      for (std::size_t r = 0; r < nonzero.size(); ++r) d[nonzero[r]] = ranks[r];
      for (std::size_t i = 0; i < diff.size(); ++i) {
        PairScore p;
        p.d = d[i];
        p.treated = treated_index(sample.set(i));
        if (diff[i] > 0.0) p.c[p.treated] = 1;
        if (diff[i] < 0.0) p.c[1 - p.treated] = 1;
        stat.pairs.push_back(p);
      }
      break;
    }

    case StatisticKind::Custom:
      throw Error(ErrorCode::ConfigError, "custom statistics need explicit d and c");
  }
  stat.observed = observed_value(stat.pairs);
  return stat;
}

SignScoreStatistic build_statistic(const MatchedSample& sample, const std::vector<double>& d,
                                   const std::vector<std::array<std::uint8_t, 2>>& c) {
  require_paired(sample);
  if (d.size() != sample.size() || c.size() != sample.size()) {
    throw Error(ErrorCode::DimensionMismatch, "custom scores must have one entry per pair");
  }
  SignScoreStatistic stat;
  stat.kind = StatisticKind::Custom;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] >= 0.0) || !std::isfinite(d[i])) {
      throw Error(ErrorCode::InvalidSample, "custom weight d must be finite and >= 0");
    }
    if (c[i][0] > 1 || c[i][1] > 1) {
      throw Error(ErrorCode::InvalidSample, "custom scores c must be 0 or 1");
    }
    stat.pairs.push_back({d[i], c[i], treated_index(sample.set(i))});
  }
  stat.observed = observed_value(stat.pairs);
  return stat;
}

}  // namespace sharpsens
