#include <gtest/gtest.h>

#include <functional>
#include <sstream>

#include "sharpsens/error.hpp"
#include "sharpsens/io.hpp"

namespace sharpsens {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

StudyConfig config_for(const std::string& interaction) {
  StudyConfig cfg;
  cfg.interaction_covariate = interaction;
  return cfg;
}

TEST(Csv, QuotedFieldsAndCrlf) {
  std::istringstream in("a,b,c\r\n\"x,1\",\"he said \"\"hi\"\"\",3\r\n\r\n4,5,6\n");
  const auto t = read_csv(in);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0], "x,1");
  EXPECT_EQ(t.rows[0][1], "he said \"hi\"");
  EXPECT_EQ(t.line_numbers[1], 4u);
}

TEST(Csv, RaggedRowIsParseError) {
  std::istringstream in("a,b\n1,2,3\n");
  EXPECT_EQ(code_of([&] { read_csv(in); }), ErrorCode::ParseError);
}

TEST(Cohort, DropsMissingRows) {
  std::istringstream in(
      "unit_id,treated,outcome,age,m\n"
      "u1,1,1,30,1\n"
      "u2,0,0,NA,1\n"
      "u3,0,1,41,\n"
      "u4,0,0,35,1\n");
  const auto r = ingest_cohort(in, config_for("m"));
  EXPECT_EQ(r.dropped_rows, 2u);
  ASSERT_EQ(r.value.units.size(), 2u);
  EXPECT_EQ(r.value.covariate_names, (std::vector<std::string>{"age", "m"}));
  EXPECT_EQ(r.value.exact_match_indices, (std::vector<std::size_t>{1}));
}

TEST(Cohort, SchemaErrors) {
  {
    std::istringstream in("unit_id,treated,outcome,age\nu1,2,1,30\n");
    EXPECT_EQ(code_of([&] { ingest_cohort(in, config_for("age")); }), ErrorCode::SchemaError);
  }
  {
    std::istringstream in("unit_id,outcome,age\nu1,1,30\n");
    try {
      ingest_cohort(in, config_for("age"));
      FAIL();
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find("treated"), std::string::npos);
    }
  }
  {
    std::istringstream in("unit_id,treated,outcome,age\nu1,1,1,3x\n");
    try {
      ingest_cohort(in, config_for("age"), "f.csv");
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError);
      EXPECT_NE(std::string(e.what()).find("f.csv:2:4"), std::string::npos);
    }
  }
  {
    std::istringstream in("unit_id,treated,outcome,age\nu1,1,1,3\n");
    EXPECT_EQ(code_of([&] { ingest_cohort(in, config_for("smokes")); }), ErrorCode::SchemaError);
  }
}

TEST(Matched, GroupsAndDropsIncompleteSets) {
  std::istringstream in(
      "set_id,unit_id,treated,outcome,x\n"
      "a,1,1,1,0\n"
      "a,2,0,0,0\n"
      "b,3,1,1,1\n"
      "b,4,0,NA,1\n"
      "c,5,0,1,1\n"
      "c,6,1,0,1\n");
  const auto r = ingest_matched(in, config_for("x"));
  EXPECT_EQ(r.dropped_rows, 2u);
  ASSERT_EQ(r.value.size(), 2u);
  EXPECT_EQ(r.value.set(0).id, "a");
  EXPECT_EQ(r.value.set(1).id, "c");
  EXPECT_TRUE(r.value.set(1).units[1].treated);
}

TEST(Matched, Violations) {
  auto run = [](const std::string& body) {
    std::istringstream in("set_id,unit_id,treated,outcome,x\n" + body);
    return code_of([&] { ingest_matched(in, config_for("x")); });
  };
  EXPECT_EQ(run("a,1,1,1,0\na,2,1,0,0\n"), ErrorCode::SchemaError);
  EXPECT_EQ(run("a,1,1,1,0\na,2,0,0,1\n"), ErrorCode::SchemaError);
  EXPECT_EQ(run("a,1,1,1,0\n"), ErrorCode::SchemaError);
}

TEST(Matched, RoundTrip) {
  std::istringstream in(
      "set_id,unit_id,treated,outcome,x,z\n"
      "1,a,1,0.1,0.3333333333333333,1e-20\n"
      "1,b,0,2,0.3333333333333333,-7.25\n"
      "2,c,0,1,1,3\n"
      "2,d,1,0,1,4\n");
  const auto first = ingest_matched(in, config_for("x")).value;
  const std::string text = write_matched_csv(first);
  std::istringstream again(text);
  const auto second = ingest_matched(again, config_for("x")).value;
  EXPECT_EQ(write_matched_csv(second), text);
  EXPECT_EQ(second.set(0).units[0].covariates[1], 1e-20);
  EXPECT_EQ(second.set(0).units[0].outcome, 0.1);
}

TEST(Config, ParsesAndValidates) {
  const auto cfg = parse_config(R"({"interaction-covariate": "m", "gamma_grid": [1, 2],
                                    "lambda-grid": [0.5, 2], "alpha": 0.1, "mode": "exact",
                                    "statistic": "wilcoxon", "decimals": 3})");
  EXPECT_EQ(cfg.interaction_covariate, "m");
  EXPECT_EQ(cfg.gamma_grid, (std::vector<double>{1, 2}));
  EXPECT_EQ(cfg.mode, TailMode::Exact);
  EXPECT_EQ(cfg.statistic, StatisticKind::WilcoxonSignedRank);
  EXPECT_NO_THROW(validate_config(cfg));

  EXPECT_EQ(code_of([] { parse_config(R"({"bogus": 1})"); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { parse_config("{"); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { parse_config(R"({"alpha": "x"})"); }), ErrorCode::ConfigError);

  StudyConfig bad;
  bad.alpha = 1.5;
  EXPECT_EQ(code_of([&] { validate_config(bad); }), ErrorCode::ConfigError);
  bad = StudyConfig{};
  bad.gamma_grid = {0.9};
  EXPECT_EQ(code_of([&] { validate_config(bad); }), ErrorCode::ConfigError);
  bad = StudyConfig{};
  bad.covariate_names = {"a"};
  bad.interaction_covariate = "b";
  EXPECT_EQ(code_of([&] { validate_config(bad); }), ErrorCode::ConfigError);
}

TEST(Names, TailModesAndFormats) {
  EXPECT_EQ(tail_mode_from_string("approx"), TailMode::Approximate);
  EXPECT_EQ(tail_mode_from_string("auto"), TailMode::Auto);
  EXPECT_EQ(report_format_from_string("json"), ReportFormat::Json);
  EXPECT_THROW(tail_mode_from_string("fast"), Error);
  EXPECT_EQ(format_shortest(0.1), "0.1");
  EXPECT_EQ(format_shortest(-0.0), "0");
}

}  // namespace
}  // namespace sharpsens
