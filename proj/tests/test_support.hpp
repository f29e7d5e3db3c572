#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sharpsens/model.hpp"

namespace sharpsens::testing {

struct PairSpec {
  double treated_outcome = 0.0;
  double control_outcome = 0.0;
  double x = 0.0;
  bool treated_second = false;  // put the treated unit at position 1
};

inline MatchedSample make_pairs(const std::vector<PairSpec>& specs,
                                std::optional<NormalizationBounds> bounds = std::nullopt) {
  std::vector<MatchedSet> sets;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    Unit t{"t" + std::to_string(i + 1), true, s.treated_outcome, {s.x}};
    Unit c{"c" + std::to_string(i + 1), false, s.control_outcome, {s.x}};
    MatchedSet set{std::to_string(i + 1), {}, {}};
    if (s.treated_second) {
      set.units = {c, t};
    } else {
      set.units = {t, c};
    }
    sets.push_back(std::move(set));
  }
  if (bounds) return MatchedSample(std::move(sets), {"x"}, 0, *bounds);
  return MatchedSample(std::move(sets), {"x"}, 0);
}

/// n discordant pairs of which `treated_wins` have the treated unit scoring 1.
inline MatchedSample discordant_pairs(int n, int treated_wins, double x = 0.0) {
  std::vector<PairSpec> specs;
  for (int i = 0; i < n; ++i) {
    const bool win = i < treated_wins;
    specs.push_back({win ? 1.0 : 0.0, win ? 0.0 : 1.0, x, false});
  }
  return make_pairs(specs, NormalizationBounds{0.0, 1.0});
}

inline double binomial_coefficient(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

/// P(Bin(n, p) >= k), summed term by term.
inline double binomial_upper_tail(int n, double p, int k) {
  double total = 0.0;
  for (int j = std::max(k, 0); j <= n; ++j) {
    total += binomial_coefficient(n, j) * std::pow(p, j) * std::pow(1.0 - p, n - j);
  }
  return k <= 0 ? 1.0 : total;
}

/// Random binary-outcome pair sample with x drawn from `levels`.
inline MatchedSample random_binary_sample(std::mt19937_64& rng, int pairs,
                                          const std::vector<double>& levels) {
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<std::size_t> pick(0, levels.size() - 1);
  std::vector<PairSpec> specs;
  for (int i = 0; i < pairs; ++i) {
    specs.push_back({static_cast<double>(bit(rng)), static_cast<double>(bit(rng)),
                     levels[pick(rng)], bit(rng) == 1});
  }
  double lo = levels.front();
  double hi = levels.front();
  for (double v : levels) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return make_pairs(specs, NormalizationBounds{lo, hi});
}

}  // namespace sharpsens::testing
