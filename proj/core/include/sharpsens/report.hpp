#pragma once

#include <string>
#include <vector>

#include "sharpsens/bounds.hpp"
#include "sharpsens/inference.hpp"
#include "sharpsens/io.hpp"
#include "sharpsens/matching.hpp"

namespace sharpsens {

/// Fixed-point text with `decimals` digits. Ties in the binary value round to
/// even (0.125 -> "0.12").
std::string format_fixed(double value, int decimals);

/// "<=1", ">=<gamma_max>" or the rounded changepoint.
std::string format_sensitivity_value(const SensitivityValue& value, int decimals);

/// Per-set bound table: values[g][x][l] = Gamma_{lambda_l, i} at gamma_g and
/// normalized covariate x.
struct GammaLambdaTable {
  std::vector<double> gammas;
  std::vector<double> lambdas;
  std::vector<double> x_grid;
  std::vector<std::vector<std::vector<double>>> values;
};

GammaLambdaTable make_gamma_lambda_table(std::vector<double> gammas, std::vector<double> lambdas,
                                         std::vector<double> x_grid);

/// CSV rounds to `decimals`; JSON keeps full precision and adds metadata.
std::string emit_report(const SensitivityReport& report, ReportFormat format, int decimals);
std::string emit_report(const BalanceReport& report, ReportFormat format, int decimals);
std::string emit_report(const LoosenessReport& report, ReportFormat format, int decimals);
std::string emit_report(const GammaLambdaTable& table, ReportFormat format, int decimals);

}  // namespace sharpsens
