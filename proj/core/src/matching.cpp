#include "sharpsens/matching.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "sharpsens/assignment.hpp"
#include "sharpsens/bounds.hpp"
#include "sharpsens/error.hpp"

namespace sharpsens {
namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a == b) return 1.0;
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<std::size_t> sorted_by_id(const std::vector<Unit>& units, bool treated) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (units[i].treated == treated) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return set_id_less(units[a].id, units[b].id);
  });
  return idx;
}

Eigen::MatrixXd pooled_covariance(const Cohort& cohort, const std::vector<std::size_t>& treated,
                                  const std::vector<std::size_t>& controls) {
  const auto k = static_cast<Eigen::Index>(cohort.covariate_names.size());
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(k, k);
  Eigen::Index dof = 0;
  for (const auto* group : {&treated, &controls}) {
    if (group->size() < 2) continue;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(group->size()), k);
    for (std::size_t r = 0; r < group->size(); ++r) {
      const auto& cov = cohort.units[(*group)[r]].covariates;
      for (Eigen::Index c = 0; c < k; ++c) x(static_cast<Eigen::Index>(r), c) = cov[c];
    }
    const Eigen::RowVectorXd mu = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mu;
    total += centered.transpose() * centered;
    dof += x.rows() - 1;
  }
  if (dof > 0) total /= static_cast<double>(dof);
  return total;
}

}  // namespace

Cohort make_cohort(std::vector<Unit> units, std::vector<std::string> covariate_names,
                   std::vector<std::size_t> exact_match_indices) {
  const std::size_t k = covariate_names.size();
  for (const auto& u : units) {
    if (u.covariates.size() != k) {
      throw Error(ErrorCode::SchemaError, "unit " + u.id + " has " +
                                              std::to_string(u.covariates.size()) +
                                              " covariates, expected " + std::to_string(k));
    }
  }
  for (auto idx : exact_match_indices) {
    if (idx >= k) throw Error(ErrorCode::SchemaError, "exact-match covariate index out of range");
  }
  std::sort(exact_match_indices.begin(), exact_match_indices.end());
  exact_match_indices.erase(std::unique(exact_match_indices.begin(), exact_match_indices.end()),
                            exact_match_indices.end());

  Cohort cohort{std::move(units), std::move(covariate_names), std::move(exact_match_indices), {}};
  cohort.scaling.assign(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> t;
    std::vector<double> ctl;
    for (const auto& u : cohort.units) (u.treated ? t : ctl).push_back(u.covariates[c]);
    cohort.scaling[c] = std::sqrt((variance_of(t) + variance_of(ctl)) / 2.0);
  }
  return cohort;
}

std::string to_string(DistanceKind kind) {
  return kind == DistanceKind::Mahalanobis ? "mahalanobis" : "standardized-euclidean";
}

DistanceKind distance_kind_from_string(const std::string& name) {
  if (name == "mahalanobis") return DistanceKind::Mahalanobis;
  if (name == "standardized-euclidean" || name == "euclidean") {
    return DistanceKind::StandardizedEuclidean;
  }
  throw Error(ErrorCode::ConfigError, "unknown distance '" + name + "'");
}

DistanceMatrix distance_matrix(const Cohort& cohort, const MatchOptions& options) {
  DistanceMatrix dm;
  dm.treated = sorted_by_id(cohort.units, true);
  dm.controls = sorted_by_id(cohort.units, false);
  const auto k = static_cast<Eigen::Index>(cohort.covariate_names.size());

  Eigen::MatrixXd weight = Eigen::MatrixXd::Zero(k, k);
  if (options.distance == DistanceKind::Mahalanobis && k > 0) {
    Eigen::MatrixXd cov = pooled_covariance(cohort, dm.treated, dm.controls);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const double top = eig.eigenvalues().maxCoeff();
    const double bottom = eig.eigenvalues().minCoeff();
    if (!(top > 0.0) || bottom <= 1e-10 * top) {
      if (!options.regularize) {
        throw Error(ErrorCode::SingularCovariance,
                    "covariate covariance is singular; enable regularization or drop covariates");
      }
      const double trace = cov.trace();
      const double ridge = trace > 0.0 ? 1e-8 * trace / static_cast<double>(k) : 1e-8;
      cov += ridge * Eigen::MatrixXd::Identity(k, k);
      dm.ridge_applied = true;
    }
    weight = cov.ldlt().solve(Eigen::MatrixXd::Identity(k, k));
  } else {
    for (Eigen::Index c = 0; c < k; ++c) {
      const double sd = cohort.scaling[static_cast<std::size_t>(c)];
      weight(c, c) = sd > 0.0 ? 1.0 / (sd * sd) : 0.0;
    }
  }

  dm.values.assign(dm.treated.size(), std::vector<double>(dm.controls.size(), 0.0));
  Eigen::VectorXd diff(k);
  for (std::size_t r = 0; r < dm.treated.size(); ++r) {
    const auto& a = cohort.units[dm.treated[r]].covariates;
    for (std::size_t c = 0; c < dm.controls.size(); ++c) {
      const auto& b = cohort.units[dm.controls[c]].covariates;
      for (Eigen::Index q = 0; q < k; ++q) diff(q) = a[q] - b[q];
      dm.values[r][c] = std::sqrt(std::max(0.0, diff.dot(weight * diff)));
    }
  }
  return dm;
}

MatchResult optimal_pair_match(const Cohort& cohort, std::size_t interaction_index,
                               const MatchOptions& options) {
  const std::size_t k = cohort.covariate_names.size();
  if (interaction_index >= k) {
    throw Error(ErrorCode::SchemaError, "interaction covariate index out of range");
  }
  std::vector<std::size_t> exact = cohort.exact_match_indices;
  if (std::find(exact.begin(), exact.end(), interaction_index) == exact.end()) {
    exact.push_back(interaction_index);
    std::sort(exact.begin(), exact.end());
  }

  const auto dm = distance_matrix(cohort, options);
  if (dm.treated.empty()) {
    throw Error(ErrorCode::InfeasibleExactMatch, "cohort has no treated units");
  }

  // Exact-match constraints split the bipartite graph into independent
  // complete blocks keyed by the exact-match values.
  using Key = std::vector<double>;
  std::map<Key, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> blocks;
  auto key_of = [&](std::size_t unit) {
    Key key;
    for (auto e : exact) key.push_back(cohort.units[unit].covariates[e]);
    return key;
  };
  for (std::size_t r = 0; r < dm.treated.size(); ++r) blocks[key_of(dm.treated[r])].first.push_back(r);
  for (std::size_t c = 0; c < dm.controls.size(); ++c) blocks[key_of(dm.controls[c])].second.push_back(c);

  std::vector<std::string> unmatched;
  for (const auto& [key, block] : blocks) {
    if (block.first.size() > block.second.size()) {
      for (auto r : block.first) unmatched.push_back(cohort.units[dm.treated[r]].id);
    }
  }
  if (!unmatched.empty()) {
    std::sort(unmatched.begin(), unmatched.end(), set_id_less);
    std::string names;
    for (const auto& id : unmatched) names += (names.empty() ? "" : ", ") + id;
    throw Error(ErrorCode::InfeasibleExactMatch,
                "not enough exactly matching controls for treated units: " + names);
  }

  std::vector<std::size_t> row_to_col(dm.treated.size(), 0);
  for (const auto& [key, block] : blocks) {
    const auto& rows = block.first;
    const auto& cols = block.second;
    if (rows.empty()) continue;
    Eigen::MatrixXd cost(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(cols.size()));
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = 0; b < cols.size(); ++b) {
        cost(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = dm.values[rows[a]][cols[b]];
      }
    }
    const auto solved = solve_assignment(cost);
    for (std::size_t a = 0; a < rows.size(); ++a) row_to_col[rows[a]] = cols[solved.row_to_col[a]];
  }

  MatchResult result{MatchedSample({}, cohort.covariate_names, interaction_index), 0.0, {},
                     dm.ridge_applied};
  std::vector<MatchedSet> sets;
  sets.reserve(dm.treated.size());
  for (std::size_t r = 0; r < dm.treated.size(); ++r) {
    const std::size_t t = dm.treated[r];
    const std::size_t c = dm.controls[row_to_col[r]];
    result.total_cost += dm.values[r][row_to_col[r]];
    result.pairs.emplace_back(t, c);
    sets.push_back({std::to_string(r + 1), {cohort.units[t], cohort.units[c]}, {}});
  }
  result.sample = MatchedSample(std::move(sets), cohort.covariate_names, interaction_index);
  return result;
}

bool BalanceReport::passes() const noexcept {
  return interaction_matched &&
         std::none_of(covariates.begin(), covariates.end(),
                      [](const CovariateBalance& c) { return c.exceeds_threshold; });
}

BalanceReport balance_diagnostics(const MatchedSample& sample, const Cohort& cohort,
                                  double threshold) {
  BalanceReport report;
  report.threshold = threshold;
  report.interaction_index = sample.interaction_index();
  const std::size_t k = sample.covariate_count();
  if (cohort.covariate_names.size() != k) {
    throw Error(ErrorCode::DimensionMismatch, "sample and cohort disagree on covariates");
  }

  for (std::size_t c = 0; c < k; ++c) {
    CovariateBalance bal;
    bal.name = sample.covariate_names()[c];
    bal.pooled_sd = cohort.scaling[c];

    std::vector<double> before_t;
    std::vector<double> before_c;
    for (const auto& u : cohort.units) (u.treated ? before_t : before_c).push_back(u.covariates[c]);

    std::vector<double> treated_vals;
    std::vector<double> control_vals;  // per set: mean over the set's controls
    std::vector<double> all_controls;
    bal.exactly_matched = true;
    for (std::size_t i = 0; i < sample.size(); ++i) {
      const auto& set = sample.set(i);
      double csum = 0.0;
      std::size_t ccount = 0;
      for (const auto& u : set.units) {
        if (u.treated) {
          treated_vals.push_back(u.covariates[c]);
        } else {
          csum += u.covariates[c];
          ++ccount;
          all_controls.push_back(u.covariates[c]);
        }
        if (u.covariates[c] != set.units.front().covariates[c]) bal.exactly_matched = false;
      }
      control_vals.push_back(ccount ? csum / static_cast<double>(ccount) : 0.0);
      bal.max_within_set_deviation =
          std::max(bal.max_within_set_deviation, sample.within_set_deviation(i, c));
    }
    bal.mean_treated = mean_of(treated_vals);
    bal.mean_control = mean_of(all_controls);
    auto standardized = [&](double diff) {
      return bal.pooled_sd > 0.0 ? std::abs(diff) / bal.pooled_sd : 0.0;
    };
    bal.std_diff_before = standardized(mean_of(before_t) - mean_of(before_c));
    bal.std_diff = standardized(bal.mean_treated - bal.mean_control);
    bal.within_pair_correlation = correlation(treated_vals, control_vals);
    bal.exceeds_threshold = bal.std_diff > threshold;
    if (c == report.interaction_index && !bal.exactly_matched) report.interaction_matched = false;
    report.covariates.push_back(std::move(bal));
  }
  return report;
}

}  // namespace sharpsens
