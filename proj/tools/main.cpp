// sharpsens: sensitivity analysis for matched pairs with an interaction
// between one observed covariate and the unobserved confounder.
//
//   sharpsens match    cohort.csv  --interaction-covariate k --out pairs.csv
//   sharpsens analyze  pairs.csv   --interaction-covariate k --gamma-grid 1,1.5,2
//   sharpsens table    --gamma 2 --gamma 3
//   sharpsens diagnose pairs.csv   --interaction-covariate k --beta ... --gamma-coef g
//   sharpsens oracle   pairs.csv   --interaction-covariate k --gamma 2 --lambda 0.5
//
// Exit codes: 0 success, 1 oracle disagreement, 2 validation/schema error,
// 3 infeasible matching, 4 numeric-mode error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sharpsens/bounds.hpp"
#include "sharpsens/error.hpp"
#include "sharpsens/inference.hpp"
#include "sharpsens/io.hpp"
#include "sharpsens/matching.hpp"
#include "sharpsens/oracle.hpp"
#include "sharpsens/report.hpp"
#include "sharpsens/version.hpp"

namespace {

using namespace sharpsens;

enum ExitCode : int {
  kOk = 0,
  kOracleMismatch = 1,
  kValidation = 2,
  kInfeasible = 3,
  kNumeric = 4,
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InfeasibleExactMatch: return kInfeasible;
    case ErrorCode::NonLatticeWeights:
    case ErrorCode::SingularCovariance:
    case ErrorCode::TooLarge: return kNumeric;
    default: return kValidation;
  }
}

// Accepts "0.5", "1/8", "-2".
double parse_value(const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(text, &used);
      if (used == text.size() && std::isfinite(v)) return v;
    } else {
      const std::string num = text.substr(0, slash);
      const std::string den = text.substr(slash + 1);
      std::size_t un = 0;
      std::size_t ud = 0;
      const double a = std::stod(num, &un);
      const double b = std::stod(den, &ud);
      if (un == num.size() && ud == den.size() && b != 0.0) return a / b;
    }
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ConfigError, "cannot parse '" + text + "' as a number");
}

std::vector<double> parse_list(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      if (!piece.empty()) out.push_back(parse_value(piece));
    }
  }
  return out;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
}

struct Flags {
  std::string config_path;
  std::string input;
  std::string out;
  std::string balance_out;
  std::string interaction;
  std::vector<std::string> exact_match;
  std::vector<std::string> covariates;
  std::string statistic;
  std::string mode;
  std::string format;
  std::string distance;
  std::vector<std::string> gamma;
  std::vector<std::string> lambda;
  std::vector<std::string> gamma_grid;
  std::vector<std::string> lambda_grid;
  std::vector<std::string> x_grid;
  std::vector<std::string> beta;
  std::string gamma_coef;
  std::optional<double> alpha;
  std::optional<int> decimals;
  std::optional<double> gamma_max;
  std::optional<double> tol;
  std::optional<double> threshold;
  bool continuity_correction = false;
};

StudyConfig resolve_config(const Flags& f) {
  StudyConfig cfg = f.config_path.empty() ? StudyConfig{} : load_config(f.config_path);
  if (!f.input.empty()) cfg.input_paths = {f.input};
  if (!f.interaction.empty()) cfg.interaction_covariate = f.interaction;
  if (!f.exact_match.empty()) cfg.exact_match = f.exact_match;
  if (!f.covariates.empty()) cfg.covariate_names = f.covariates;
  if (!f.statistic.empty()) cfg.statistic = statistic_kind_from_string(f.statistic);
  if (!f.mode.empty()) cfg.mode = tail_mode_from_string(f.mode);
  if (!f.format.empty()) cfg.format = report_format_from_string(f.format);
  if (!f.distance.empty()) cfg.distance = distance_kind_from_string(f.distance);
  if (!f.gamma_grid.empty() || !f.gamma.empty()) {
    auto grid = parse_list(f.gamma_grid);
    const auto extra = parse_list(f.gamma);
    grid.insert(grid.end(), extra.begin(), extra.end());
    cfg.gamma_grid = grid;
  }
  if (!f.lambda_grid.empty() || !f.lambda.empty()) {
    auto grid = parse_list(f.lambda_grid);
    const auto extra = parse_list(f.lambda);
    grid.insert(grid.end(), extra.begin(), extra.end());
    cfg.lambda_grid = grid;
  }
  if (f.alpha) cfg.alpha = *f.alpha;
  if (f.decimals) cfg.decimals = *f.decimals;
  if (f.gamma_max) cfg.gamma_max = *f.gamma_max;
  if (f.tol) cfg.tol = *f.tol;
  if (f.threshold) cfg.balance_threshold = *f.threshold;
  if (f.continuity_correction) cfg.continuity_correction = true;
  validate_config(cfg);
  return cfg;
}

const std::string& input_path(const StudyConfig& cfg) {
  if (cfg.input_paths.empty()) throw Error(ErrorCode::ConfigError, "no input file given");
  return cfg.input_paths.front();
}

void report_dropped(std::size_t dropped) {
  if (dropped > 0) std::cerr << "dropped " << dropped << " row(s) with missing values\n";
}

int run_match(const Flags& f) {
  const auto cfg = resolve_config(f);
  const auto cohort = ingest_cohort(input_path(cfg), cfg);
  report_dropped(cohort.dropped_rows);
  const auto& names = cohort.value.covariate_names;
  const auto k = static_cast<std::size_t>(
      std::find(names.begin(), names.end(), cfg.interaction_covariate) - names.begin());
  MatchOptions options;
  options.distance = cfg.distance;
  const auto matched = optimal_pair_match(cohort.value, k, options);
  if (matched.ridge_applied) std::cerr << "covariance was near-singular; ridge term added\n";
  if (f.out.empty()) throw Error(ErrorCode::ConfigError, "match needs --out for the matched CSV");
  write_output(write_matched_csv(matched.sample), f.out);
  const auto balance = balance_diagnostics(matched.sample, cohort.value, cfg.balance_threshold);
  write_output(emit_report(balance, cfg.format, cfg.decimals), f.balance_out);
  if (!balance.passes()) {
    std::cerr << "warning: balance above threshold " << cfg.balance_threshold
              << " for at least one covariate\n";
  }
  return kOk;
}

int run_analyze(const Flags& f) {
  const auto cfg = resolve_config(f);
  const auto sample = ingest_matched(input_path(cfg), cfg);
  report_dropped(sample.dropped_rows);
  const auto stat = build_statistic(sample.value, cfg.statistic);
  SearchOptions options;
  options.gamma_max = cfg.gamma_max;
  options.tol = cfg.tol;
  options.tail.mode = cfg.mode;
  options.tail.continuity_correction = cfg.continuity_correction;
  auto report = p_value_grid(stat, sample.value, cfg.gamma_grid, cfg.lambda_grid, cfg.alpha, options);
  report.rounding = cfg.decimals;
  if (report.approximate) std::cerr << "note: p-values use the normal approximation\n";
  write_output(emit_report(report, cfg.format, cfg.decimals), f.out);
  return kOk;
}

int run_table(const Flags& f) {
  auto gammas = parse_list(f.gamma);
  auto lambdas = parse_list(f.lambda_grid.empty() ? f.lambda : f.lambda_grid);
  auto xs = parse_list(f.x_grid);
  if (gammas.empty()) gammas = {2.0, 3.0};
  if (lambdas.empty()) lambdas = {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  if (xs.empty()) xs = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  const auto format = f.format.empty() ? ReportFormat::Csv : report_format_from_string(f.format);
  const int decimals = f.decimals.value_or(2);
  const auto table = make_gamma_lambda_table(gammas, lambdas, xs);
  write_output(emit_report(table, format, decimals), f.out);
  return kOk;
}

int run_diagnose(const Flags& f) {
  const auto cfg = resolve_config(f);
  const auto sample = ingest_matched(input_path(cfg), cfg);
  report_dropped(sample.dropped_rows);
  ModelParams params;
  params.beta = parse_list(f.beta);
  if (f.gamma_coef.empty()) throw Error(ErrorCode::ConfigError, "diagnose needs --gamma-coef");
  params.gamma_coef = parse_value(f.gamma_coef);
  const auto report = diagnose_looseness(params, sample.value);
  write_output(emit_report(report, cfg.format, cfg.decimals), f.out);
  return kOk;
}

int run_oracle(const Flags& f) {
  const auto cfg = resolve_config(f);
  const auto sample = ingest_matched(input_path(cfg), cfg);
  report_dropped(sample.dropped_rows);
  const auto stat = build_statistic(sample.value, cfg.statistic);
  TailOptions tail;
  tail.mode = cfg.mode;
  int status = kOk;
  std::string out = "gamma,lambda,closed_form,brute_force,abs_diff\n";
  for (double g : cfg.gamma_grid) {
    for (double l : cfg.lambda_grid) {
      const SensitivityParams params{g, l};
      const double closed = worst_case_p_value(stat, params, sample.value, tail);
      const auto brute = brute_force_worst_case(stat, params, sample.value);
      const double diff = std::abs(closed - brute.p_value);
      if (diff > 1e-9) status = kOracleMismatch;
      char line[256];
      std::snprintf(line, sizeof line, "%s,%s,%.17g,%.17g,%.3g\n", format_shortest(g).c_str(),
                    format_shortest(l).c_str(), closed, brute.p_value, diff);
      out += line;
    }
  }
  write_output(out, f.out);
  return status;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--interaction-covariate", f.interaction, "Covariate allowed to interact with u");
  cmd->add_option("--covariates", f.covariates, "Covariate columns to use (default: all)")
      ->delimiter(',');
  cmd->add_option("--format", f.format, "Output format: csv or json");
  cmd->add_option("--out", f.out, "Output path (default: stdout)");
  cmd->add_option("--decimals", f.decimals, "Digits after the decimal point in CSV output");
}

void add_grid(CLI::App* cmd, Flags& f) {
  cmd->add_option("--gamma", f.gamma, "Gamma value (repeatable)");
  cmd->add_option("--lambda", f.lambda, "Lambda value (repeatable)");
  cmd->add_option("--gamma-grid", f.gamma_grid, "Comma-separated Gamma values");
  cmd->add_option("--lambda-grid", f.lambda_grid, "Comma-separated lambda values (1/8 accepted)");
  cmd->add_option("--statistic", f.statistic, "mcnemar or wilcoxon");
  cmd->add_option("--alpha", f.alpha, "Test level");
  cmd->add_option("--mode", f.mode, "exact, approx or auto");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensitivity analysis for matched pairs with covariate-confounder interactions"};
  app.set_version_flag("--version", sharpsens::kVersion);
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config_path, "JSON study configuration")->check(CLI::ExistingFile);

  auto* match = app.add_subcommand("match", "Optimal pair matching of a cohort CSV");
  match->add_option("cohort", f.input, "Cohort CSV")->required();
  add_common(match, f);
  match->add_option("--exact-match", f.exact_match, "Covariate to match exactly (repeatable)");
  match->add_option("--distance", f.distance, "mahalanobis or standardized-euclidean");
  match->add_option("--balance-out", f.balance_out, "Balance report path (default: stdout)");
  match->add_option("--threshold", f.threshold, "Standardized-difference threshold");

  auto* analyze = app.add_subcommand("analyze", "Worst-case p-values over a Gamma x lambda grid");
  analyze->add_option("matched", f.input, "Matched CSV")->required();
  add_common(analyze, f);
  add_grid(analyze, f);
  analyze->add_option("--gamma-max", f.gamma_max, "Upper end of the sensitivity-value search");
  analyze->add_option("--tol", f.tol, "Bracket width of the sensitivity-value search");
  analyze->add_flag("--continuity-correction", f.continuity_correction,
                    "Continuity correction for the normal approximation");

  auto* table = app.add_subcommand("table", "Per-set bounds over Gamma, lambda and normalized x");
  table->add_option("--gamma", f.gamma, "Gamma value (repeatable)");
  table->add_option("--lambda", f.lambda, "Lambda value (repeatable)");
  table->add_option("--lambda-grid", f.lambda_grid, "Comma-separated lambda values");
  table->add_option("--x-grid", f.x_grid, "Comma-separated normalized covariate values");
  table->add_option("--format", f.format, "Output format: csv or json");
  table->add_option("--out", f.out, "Output path (default: stdout)");
  table->add_option("--decimals", f.decimals, "Digits after the decimal point");

  auto* diagnose = app.add_subcommand("diagnose", "Per-set looseness of the uniform bound");
  diagnose->add_option("matched", f.input, "Matched CSV")->required();
  add_common(diagnose, f);
  diagnose->add_option("--beta", f.beta, "Interaction coefficients, one per covariate");
  diagnose->add_option("--gamma-coef", f.gamma_coef, "Main-effect coefficient of u");

  auto* oracle = app.add_subcommand("oracle", "Cross-check worst-case p-values by enumeration");
  oracle->add_option("matched", f.input, "Matched CSV with at most 8 pairs")->required();
  add_common(oracle, f);
  add_grid(oracle, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kValidation;
  }

  try {
    if (*match) return run_match(f);
    if (*analyze) return run_analyze(f);
    if (*table) return run_table(f);
    if (*diagnose) return run_diagnose(f);
    if (*oracle) return run_oracle(f);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kOk;
}
