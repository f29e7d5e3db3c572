#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "sharpsens/distribution.hpp"
#include "sharpsens/matching.hpp"
#include "sharpsens/model.hpp"
#include "sharpsens/statistic.hpp"

namespace sharpsens {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

/// RFC 4180 style: comma separated, optional double quotes, "" escapes a
/// quote, CRLF tolerated. Rows whose field count differs from the header are
/// a ParseError.
CsvTable read_csv(std::istream& in, const std::string& source = "<input>");
CsvTable read_csv_file(const std::string& path);

enum class ReportFormat { Csv, Json };

ReportFormat report_format_from_string(const std::string& name);
TailMode tail_mode_from_string(const std::string& name);
std::string to_string(TailMode mode);

struct StudyConfig {
  std::vector<std::string> input_paths;
  std::vector<std::string> covariate_names;  // empty: every column after outcome
  std::string interaction_covariate;
  std::vector<std::string> exact_match;
  StatisticKind statistic = StatisticKind::McNemar;
  std::vector<double> gamma_grid{1.0, 1.25, 1.5, 1.75, 2.0};
  std::vector<double> lambda_grid{0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  double alpha = 0.05;
  TailMode mode = TailMode::Auto;
  bool continuity_correction = false;
  ReportFormat format = ReportFormat::Csv;
  int decimals = 2;
  DistanceKind distance = DistanceKind::Mahalanobis;
  double gamma_max = 100.0;
  double tol = 1e-4;
  double balance_threshold = 0.1;
};

/// Reads a flat JSON object whose keys mirror the StudyConfig fields (with
/// dashes or underscores). Unknown keys are a ConfigError.
StudyConfig load_config(const std::string& path);
StudyConfig parse_config(const std::string& json_text);

/// Throws ConfigError when grids are empty, alpha is outside (0, 1), or the
/// interaction covariate is missing from an explicit covariate list.
void validate_config(const StudyConfig& config);

template <typename T>
struct Ingested {
  T value;
  std::size_t dropped_rows = 0;
};

/// Columns: unit_id, treated (0/1), outcome, covariates... Rows with an empty
/// or NA cell in a used column are dropped and counted.
Ingested<Cohort> ingest_cohort(const std::string& path, const StudyConfig& config);
Ingested<Cohort> ingest_cohort(std::istream& in, const StudyConfig& config,
                               const std::string& source = "<input>");

/// Same columns after a leading set_id. A set losing any row to missing data
/// is dropped whole (its rows are counted).
Ingested<MatchedSample> ingest_matched(const std::string& path, const StudyConfig& config);
Ingested<MatchedSample> ingest_matched(std::istream& in, const StudyConfig& config,
                                       const std::string& source = "<input>");

/// Matched-data CSV in the layout ingest_matched() reads, numbers written in
/// shortest round-trip form.
std::string write_matched_csv(const MatchedSample& sample);

/// Shortest decimal string that parses back to the same double.
std::string format_shortest(double value);

}  // namespace sharpsens
