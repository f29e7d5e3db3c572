#include "sharpsens/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sharpsens/error.hpp"

namespace sharpsens {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool is_missing(const std::string& cell) {
  std::string t = trim(cell);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  return t.empty() || t == "na" || t == "nan";
}

std::string location(const std::string& source, std::size_t line, std::size_t column) {
  return source + ":" + std::to_string(line) + ":" + std::to_string(column);
}

double parse_number(const std::string& cell, const std::string& source, std::size_t line,
                    std::size_t column) {
  const std::string t = trim(cell);
  double value = 0.0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(value)) {
    throw Error(ErrorCode::ParseError,
                location(source, line, column) + ": cannot parse '" + t + "' as a number");
  }
  return value;
}

std::vector<double> parse_grid(const nlohmann::json& j, const std::string& key) {
  if (!j.is_array()) throw Error(ErrorCode::ConfigError, key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw Error(ErrorCode::ConfigError, key + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::string> parse_strings(const nlohmann::json& j, const std::string& key) {
  if (j.is_string()) return {j.get<std::string>()};
  if (!j.is_array()) throw Error(ErrorCode::ConfigError, key + " must be a string or array");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw Error(ErrorCode::ConfigError, key + " must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name,
                         const std::string& source) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw Error(ErrorCode::SchemaError, source + ": missing column '" + name + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

struct Layout {
  std::size_t set_id = 0;
  std::size_t unit_id = 0;
  std::size_t treated = 0;
  std::size_t outcome = 0;
  std::vector<std::size_t> covariates;
  std::vector<std::string> covariate_names;
  std::size_t interaction = 0;
  std::vector<std::size_t> exact;
};

Layout resolve_layout(const CsvTable& table, const StudyConfig& config, bool matched,
                      const std::string& source) {
  const auto& h = table.header;
  Layout layout;
  if (matched) layout.set_id = column_index(h, "set_id", source);
  layout.unit_id = column_index(h, "unit_id", source);
  layout.treated = column_index(h, "treated", source);
  layout.outcome = column_index(h, "outcome", source);

  if (config.covariate_names.empty()) {
    const std::array<std::string, 4> reserved{"set_id", "unit_id", "treated", "outcome"};
    for (std::size_t c = 0; c < h.size(); ++c) {
      if (std::find(reserved.begin(), reserved.end(), h[c]) != reserved.end()) continue;
      layout.covariates.push_back(c);
      layout.covariate_names.push_back(h[c]);
    }
  } else {
    for (const auto& name : config.covariate_names) {
      layout.covariates.push_back(column_index(h, name, source));
      layout.covariate_names.push_back(name);
    }
  }
  if (layout.covariate_names.empty()) {
    throw Error(ErrorCode::SchemaError, source + ": no covariate columns");
  }
  auto covariate_position = [&](const std::string& name) {
    const auto it = std::find(layout.covariate_names.begin(), layout.covariate_names.end(), name);
    if (it == layout.covariate_names.end()) {
      throw Error(ErrorCode::SchemaError, source + ": missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - layout.covariate_names.begin());
  };
  if (config.interaction_covariate.empty()) {
    throw Error(ErrorCode::ConfigError, "an interaction covariate must be named");
  }
  layout.interaction = covariate_position(config.interaction_covariate);
  layout.exact.push_back(layout.interaction);
  for (const auto& name : config.exact_match) layout.exact.push_back(covariate_position(name));
  return layout;
}

// Parses one row into a unit; returns false when a used cell is missing.
bool parse_unit(const CsvTable& table, std::size_t r, const Layout& layout, bool matched,
                const std::string& source, Unit& unit) {
  const auto& row = table.rows[r];
  const std::size_t line = table.line_numbers[r];
  std::vector<std::size_t> used{layout.unit_id, layout.treated, layout.outcome};
  if (matched) used.push_back(layout.set_id);
  used.insert(used.end(), layout.covariates.begin(), layout.covariates.end());
  for (auto c : used) {
    if (is_missing(row[c])) return false;
  }
  unit.id = trim(row[layout.unit_id]);
  const std::string z = trim(row[layout.treated]);
  if (z != "0" && z != "1") {
    throw Error(ErrorCode::SchemaError, location(source, line, layout.treated + 1) +
                                            ": treated must be 0 or 1, got '" + z + "'");
  }
  unit.treated = z == "1";
  unit.outcome = parse_number(row[layout.outcome], source, line, layout.outcome + 1);
  unit.covariates.clear();
  for (auto c : layout.covariates) unit.covariates.push_back(parse_number(row[c], source, line, c + 1));
  return true;
}

}  // namespace

CsvTable read_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t record_line = 1;
  bool have_header = false;

  auto finish_record = [&]() {
    record.push_back(field);
    field.clear();
    const bool blank = record.size() == 1 && trim(record[0]).empty();
    if (!blank) {
      if (!have_header) {
        for (auto& h : record) h = trim(h);
        table.header = record;
        have_header = true;
      } else {
        if (record.size() != table.header.size()) {
          throw Error(ErrorCode::ParseError,
                      location(source, record_line, record.size()) + ": expected " +
                          std::to_string(table.header.size()) + " fields, found " +
                          std::to_string(record.size()));
        }
        table.rows.push_back(record);
        table.line_numbers.push_back(record_line);
      }
    }
    record.clear();
    field_started = false;
  };

  char ch = 0;
  while (in.get(ch)) {
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field_started || trim(field).empty()) {
          field.clear();
          in_quotes = true;
          field_started = true;
        } else {
          throw Error(ErrorCode::ParseError,
                      location(source, line, record.size() + 1) + ": stray quote in field");
        }
        break;
      case ',':
        record.push_back(field);
        field.clear();
        field_started = false;
        break;
      case '\r':
        break;
      case '\n':
        finish_record();
        ++line;
        record_line = line;
        break;
      default:
        field.push_back(ch);
        field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::ParseError, location(source, line, record.size() + 1) + ": unterminated quote");
  }
  if (!field.empty() || !record.empty()) finish_record();
  if (!have_header) throw Error(ErrorCode::SchemaError, source + ": missing header row");
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return read_csv(in, path);
}

ReportFormat report_format_from_string(const std::string& name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw Error(ErrorCode::ConfigError, "unknown format '" + name + "'");
}

TailMode tail_mode_from_string(const std::string& name) {
  if (name == "exact") return TailMode::Exact;
  if (name == "approx" || name == "approximate") return TailMode::Approximate;
  if (name == "auto") return TailMode::Auto;
  throw Error(ErrorCode::ConfigError, "unknown mode '" + name + "'");
}

std::string to_string(TailMode mode) {
  switch (mode) {
    case TailMode::Exact: return "exact";
    case TailMode::Approximate: return "approximate";
    case TailMode::Auto: return "auto";
  }
  return "auto";
}

StudyConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");

  StudyConfig cfg;
  for (const auto& [raw_key, value] : j.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '-', '_');
    try {
      if (key == "input_paths" || key == "input") {
        cfg.input_paths = parse_strings(value, key);
      } else if (key == "covariate_names" || key == "covariates") {
        cfg.covariate_names = parse_strings(value, key);
      } else if (key == "interaction_covariate") {
        cfg.interaction_covariate = value.get<std::string>();
      } else if (key == "exact_match") {
        cfg.exact_match = parse_strings(value, key);
      } else if (key == "statistic") {
        cfg.statistic = statistic_kind_from_string(value.get<std::string>());
      } else if (key == "gamma_grid") {
        cfg.gamma_grid = parse_grid(value, key);
      } else if (key == "lambda_grid") {
        cfg.lambda_grid = parse_grid(value, key);
      } else if (key == "alpha") {
        cfg.alpha = value.get<double>();
      } else if (key == "mode") {
        cfg.mode = tail_mode_from_string(value.get<std::string>());
      } else if (key == "continuity_correction") {
        cfg.continuity_correction = value.get<bool>();
      } else if (key == "format") {
        cfg.format = report_format_from_string(value.get<std::string>());
      } else if (key == "decimals" || key == "rounding") {
        cfg.decimals = value.get<int>();
      } else if (key == "distance") {
        cfg.distance = distance_kind_from_string(value.get<std::string>());
      } else if (key == "gamma_max") {
        cfg.gamma_max = value.get<double>();
      } else if (key == "tol") {
        cfg.tol = value.get<double>();
      } else if (key == "balance_threshold") {
        cfg.balance_threshold = value.get<double>();
      } else {
        throw Error(ErrorCode::ConfigError, "unknown config key '" + raw_key + "'");
      }
    } catch (const nlohmann::json::type_error&) {
      throw Error(ErrorCode::ConfigError, "config key '" + raw_key + "' has the wrong type");
    }
  }
  return cfg;
}

StudyConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const StudyConfig& config) {
  if (config.gamma_grid.empty()) throw Error(ErrorCode::ConfigError, "gamma grid is empty");
  if (config.lambda_grid.empty()) throw Error(ErrorCode::ConfigError, "lambda grid is empty");
  for (double g : config.gamma_grid) {
    if (!(g >= 1.0) || !std::isfinite(g)) {
      throw Error(ErrorCode::ConfigError, "gamma grid values must be finite and >= 1");
    }
  }
  for (double l : config.lambda_grid) {
    if (!std::isfinite(l)) throw Error(ErrorCode::ConfigError, "lambda grid values must be finite");
  }
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw Error(ErrorCode::ConfigError, "alpha must lie in (0, 1)");
  }
  if (config.decimals < 0 || config.decimals > 17) {
    throw Error(ErrorCode::ConfigError, "decimals must be between 0 and 17");
  }
  if (!config.covariate_names.empty() && !config.interaction_covariate.empty() &&
      std::find(config.covariate_names.begin(), config.covariate_names.end(),
                config.interaction_covariate) == config.covariate_names.end()) {
    throw Error(ErrorCode::ConfigError, "interaction covariate '" + config.interaction_covariate +
                                            "' is not among the covariates");
  }
}

Ingested<Cohort> ingest_cohort(std::istream& in, const StudyConfig& config,
                               const std::string& source) {
  const auto table = read_csv(in, source);
  const auto layout = resolve_layout(table, config, false, source);
  Ingested<Cohort> out{Cohort{}, 0};
  std::vector<Unit> units;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    Unit u;
    if (parse_unit(table, r, layout, false, source, u)) {
      units.push_back(std::move(u));
    } else {
      ++out.dropped_rows;
    }
  }
  out.value = make_cohort(std::move(units), layout.covariate_names, layout.exact);
  return out;
}

Ingested<Cohort> ingest_cohort(const std::string& path, const StudyConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return ingest_cohort(in, config, path);
}

Ingested<MatchedSample> ingest_matched(std::istream& in, const StudyConfig& config,
                                       const std::string& source) {
  const auto table = read_csv(in, source);
  const auto layout = resolve_layout(table, config, true, source);

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> rows_of;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string id = trim(table.rows[r][layout.set_id]);
    if (id.empty()) {
      throw Error(ErrorCode::SchemaError,
                  location(source, table.line_numbers[r], layout.set_id + 1) + ": empty set_id");
    }
    auto [it, fresh] = rows_of.try_emplace(id);
    if (fresh) order.push_back(id);
    it->second.push_back(r);
  }

  std::size_t dropped = 0;
  std::vector<MatchedSet> sets;
  for (const auto& id : order) {
    const auto& rows = rows_of[id];
    MatchedSet set{id, {}, {}};
    bool complete = true;
    for (auto r : rows) {
      Unit u;
      if (!parse_unit(table, r, layout, true, source, u)) {
        complete = false;
        continue;
      }
      set.units.push_back(std::move(u));
    }
    if (!complete) {
      dropped += rows.size();
      continue;
    }
    const auto treated = std::count_if(set.units.begin(), set.units.end(),
                                       [](const Unit& u) { return u.treated; });
    if (treated != 1) {
      throw Error(ErrorCode::SchemaError, source + ": Σ Z ≠ 1 in set " + id + " (" +
                                              std::to_string(treated) + " treated)");
    }
    if (set.units.size() < 2) {
      throw Error(ErrorCode::SchemaError, source + ": set " + id + " has fewer than two units");
    }
    const double x = set.units.front().covariates[layout.interaction];
    for (const auto& u : set.units) {
      if (u.covariates[layout.interaction] != x) {
        throw Error(ErrorCode::SchemaError, source + ": units of set " + id +
                                                " disagree on interaction covariate '" +
                                                config.interaction_covariate + "'");
      }
    }
    sets.push_back(std::move(set));
  }
  return {MatchedSample(std::move(sets), layout.covariate_names, layout.interaction), dropped};
}

Ingested<MatchedSample> ingest_matched(const std::string& path, const StudyConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return ingest_matched(in, config, path);
}

std::string format_shortest(double value) {
  if (value == 0.0) return "0";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string write_matched_csv(const MatchedSample& sample) {
  std::string out = "set_id,unit_id,treated,outcome";
  for (const auto& name : sample.covariate_names()) out += "," + csv_field(name);
  out += "\n";
  for (const auto& set : sample.sets()) {
    for (const auto& u : set.units) {
      out += csv_field(set.id) + "," + csv_field(u.id) + "," + (u.treated ? "1" : "0") + "," +
             format_shortest(u.outcome);
      for (double x : u.covariates) out += "," + format_shortest(x);
      out += "\n";
    }
  }
  return out;
}

}  // namespace sharpsens
