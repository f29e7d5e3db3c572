#include "sharpsens/report.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include <nlohmann/json.hpp>

#include "sharpsens/error.hpp"
#include "sharpsens/version.hpp"

namespace sharpsens {
namespace {

nlohmann::json metadata(const std::string& kind) {
  return {{"tool", "sharpsens"}, {"version", kVersion}, {"report", kind}};
}

std::string kind_name(SensitivityValue::Kind kind) {
  switch (kind) {
    case SensitivityValue::Kind::Interior: return "interior";
    case SensitivityValue::Kind::AtMostOne: return "at_most_one";
    case SensitivityValue::Kind::AtLeastMax: return "at_least_max";
  }
  return "interior";
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_fixed(double value, int decimals) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  // "-0.00" reads as a sign error in a table.
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string format_sensitivity_value(const SensitivityValue& value, int decimals) {
  switch (value.kind) {
    case SensitivityValue::Kind::AtMostOne: return "<=1";
    case SensitivityValue::Kind::AtLeastMax: return ">=" + format_shortest(value.gamma);
    case SensitivityValue::Kind::Interior: return format_fixed(value.gamma, decimals);
  }
  return "";
}

GammaLambdaTable make_gamma_lambda_table(std::vector<double> gammas, std::vector<double> lambdas,
                                         std::vector<double> x_grid) {
  if (gammas.empty() || lambdas.empty() || x_grid.empty()) {
    throw Error(ErrorCode::ConfigError, "table grids must be nonempty");
  }
  GammaLambdaTable t{std::move(gammas), std::move(lambdas), std::move(x_grid), {}};
  for (double g : t.gammas) {
    std::vector<std::vector<double>> block;
    for (double x : t.x_grid) {
      std::vector<double> row;
      for (double l : t.lambdas) row.push_back(gamma_lambda(g, l, x));
      block.push_back(std::move(row));
    }
    t.values.push_back(std::move(block));
  }
  return t;
}

std::string emit_report(const SensitivityReport& report, ReportFormat format, int decimals) {
  if (format == ReportFormat::Json) {
    auto j = metadata("sensitivity");
    j["statistic"] = report.statistic_name;
    j["alpha"] = report.alpha;
    j["mode"] = to_string(report.mode);
    j["approximate"] = report.approximate;
    j["observed"] = report.observed;
    j["gamma_grid"] = report.gamma_grid;
    j["lambda_grid"] = report.lambda_grid;
    j["p_values"] = report.p_values;
    auto sv = nlohmann::json::array();
    for (std::size_t l = 0; l < report.lambda_grid.size(); ++l) {
      const auto& v = report.sensitivity_values[l];
      sv.push_back({{"lambda", report.lambda_grid[l]}, {"kind", kind_name(v.kind)}, {"gamma", v.gamma}});
    }
    j["sensitivity_values"] = std::move(sv);
    return dump(j);
  }
  std::string out = "gamma";
  for (double l : report.lambda_grid) out += "," + format_shortest(l);
  out += "\n";
  for (std::size_t g = 0; g < report.gamma_grid.size(); ++g) {
    out += format_shortest(report.gamma_grid[g]);
    for (double p : report.p_values[g]) out += "," + format_fixed(p, decimals);
    out += "\n";
  }
  out += "sensitivity_value";
  for (const auto& v : report.sensitivity_values) out += "," + format_sensitivity_value(v, decimals);
  out += "\n";
  return out;
}

std::string emit_report(const BalanceReport& report, ReportFormat format, int decimals) {
  if (format == ReportFormat::Json) {
    auto j = metadata("balance");
    j["threshold"] = report.threshold;
    j["interaction_index"] = report.interaction_index;
    j["interaction_matched"] = report.interaction_matched;
    j["passes"] = report.passes();
    auto cov = nlohmann::json::array();
    for (const auto& c : report.covariates) {
      cov.push_back({{"name", c.name},
                     {"mean_treated", c.mean_treated},
                     {"mean_control", c.mean_control},
                     {"pooled_sd", c.pooled_sd},
                     {"std_diff_before", c.std_diff_before},
                     {"std_diff", c.std_diff},
                     {"within_pair_correlation", c.within_pair_correlation},
                     {"max_within_set_deviation", c.max_within_set_deviation},
                     {"exactly_matched", c.exactly_matched},
                     {"exceeds_threshold", c.exceeds_threshold}});
    }
    j["covariates"] = std::move(cov);
    return dump(j);
  }
  std::string out =
      "covariate,mean_treated,mean_control,std_diff_before,std_diff,within_pair_correlation,"
      "max_within_set_deviation,exactly_matched,exceeds_threshold\n";
  for (const auto& c : report.covariates) {
    out += c.name + "," + format_fixed(c.mean_treated, decimals) + "," +
           format_fixed(c.mean_control, decimals) + "," + format_fixed(c.std_diff_before, decimals) +
           "," + format_fixed(c.std_diff, decimals) + "," +
           format_fixed(c.within_pair_correlation, decimals) + "," +
           format_fixed(c.max_within_set_deviation, decimals) + "," +
           (c.exactly_matched ? "1" : "0") + "," + (c.exceeds_threshold ? "1" : "0") + "\n";
  }
  return out;
}

std::string emit_report(const LoosenessReport& report, ReportFormat format, int decimals) {
  if (format == ReportFormat::Json) {
    auto j = metadata("looseness");
    j["implied_gamma"] = report.implied_gamma;
    j["any_loose"] = report.any_loose();
    j["attaining"] = report.attaining;
    j["attaining_covariates"] = report.attaining_covariates;
    auto sets = nlohmann::json::array();
    for (const auto& e : report.sets) {
      sets.push_back({{"set_id", e.set_id}, {"upsilon", e.upsilon}, {"is_loose", e.is_loose}});
    }
    j["sets"] = std::move(sets);
    return dump(j);
  }
  std::string out = "set_id,upsilon,is_loose\n";
  for (const auto& e : report.sets) {
    out += e.set_id + "," + format_fixed(e.upsilon, decimals) + "," + (e.is_loose ? "1" : "0") + "\n";
  }
  out += "implied_gamma," + format_fixed(report.implied_gamma, decimals) + ",\n";
  return out;
}

std::string emit_report(const GammaLambdaTable& table, ReportFormat format, int decimals) {
  if (format == ReportFormat::Json) {
    auto j = metadata("gamma_lambda_table");
    j["gammas"] = table.gammas;
    j["lambdas"] = table.lambdas;
    j["x_grid"] = table.x_grid;
    j["values"] = table.values;
    return dump(j);
  }
  std::string out;
  for (std::size_t g = 0; g < table.gammas.size(); ++g) {
    out += "gamma,x_norm";
    for (double l : table.lambdas) out += "," + format_shortest(l);
    out += "\n";
    for (std::size_t x = 0; x < table.x_grid.size(); ++x) {
      out += format_shortest(table.gammas[g]) + "," + format_shortest(table.x_grid[x]);
      for (double v : table.values[g][x]) out += "," + format_fixed(v, decimals);
      out += "\n";
    }
  }
  return out;
}

}  // namespace sharpsens
