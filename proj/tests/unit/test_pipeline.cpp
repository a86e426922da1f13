#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "heatpanel/config.hpp"
#include "heatpanel/error.hpp"
#include "heatpanel/pipeline.hpp"
#include "heatpanel/report.hpp"

namespace heatpanel {
namespace {

namespace fs = std::filesystem;

const std::string kDataDir = HEATPANEL_DATA_DIR;

PipelineConfig separable_config() {
  PipelineConfig c;
  c.panel_path = kDataDir + "/separable.csv";
  c.target = "night_lst";
  c.factors = {"f1", "f2"};
  c.permutations = 999;
  return c;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::IoError;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Pipeline, SeparableFixtureVerdicts) {
  const auto report = run_pipeline(separable_config());
  ASSERT_TRUE(report.grouping.has_value());
  EXPECT_EQ(report.grouping->increasing.size(), 11u);
  EXPECT_EQ(report.grouping->non_increasing.size(), 11u);
  ASSERT_EQ(report.tests.size(), 2u);
  EXPECT_EQ(report.tests[0].factor, "f1");
  EXPECT_EQ(report.tests[0].result.verdict, Verdict::Causal);
  EXPECT_EQ(report.tests[1].result.verdict, Verdict::NotCausal);
  for (const auto& t : report.tests) {
    EXPECT_EQ(t.result.df1, 3);
    EXPECT_EQ(t.result.df2, 18);
    EXPECT_EQ(t.n1 + t.n2, report.regions.size());
    EXPECT_EQ(t.n1, report.grouping->increasing.size());
    ASSERT_TRUE(t.permutation.has_value());
    EXPECT_FALSE(t.permutation->exact);
  }
  ASSERT_TRUE(report.correlations.has_value());
  EXPECT_EQ(report.correlations->rows.size(), 22u);
  ASSERT_EQ(report.breaks.size(), 2u);
  EXPECT_EQ(report.breaks[0].classes.labels.size(), 22u);
}

TEST(Pipeline, StandardizeKeepsStatistic) {
  auto c = separable_config();
  c.permutations = 0;
  const auto raw = run_pipeline(c);
  c.standardize = true;
  const auto z = run_pipeline(c);
  for (std::size_t i = 0; i < raw.tests.size(); ++i) {
    EXPECT_NEAR(z.tests[i].result.t2, raw.tests[i].result.t2, 1e-8 * raw.tests[i].result.t2);
    EXPECT_FALSE(z.tests[i].permutation.has_value());
  }
}

TEST(Pipeline, FixedInfiniteThresholdIsDegenerate) {
  auto c = separable_config();
  c.threshold_policy = FixedThreshold{std::numeric_limits<double>::infinity()};
  EXPECT_EQ(code_of([&] { run_pipeline(c); }), ErrorCode::DegenerateGrouping);
  // The classify stage alone still succeeds with an empty increasing set.
  const auto classified = run_pipeline(c, Stage::Classify);
  EXPECT_TRUE(classified.grouping->increasing.empty());
}

TEST(Pipeline, FixedThresholdEqualToMedianReproducesGrouping) {
  auto c = separable_config();
  c.permutations = 0;
  const auto first = run_pipeline(c, Stage::Classify);
  c.threshold_policy = FixedThreshold{*first.threshold};
  const auto second = run_pipeline(c, Stage::Classify);
  EXPECT_EQ(first.grouping->increasing, second.grouping->increasing);
  EXPECT_EQ(first.grouping->non_increasing, second.grouping->non_increasing);
}

TEST(Pipeline, ConfigErrorsBeforeComputation) {
  auto c = separable_config();
  c.alpha = 1.5;
  EXPECT_EQ(code_of([&] { run_pipeline(c); }), ErrorCode::BadAlpha);
  c = separable_config();
  c.factors = {"f1", "nope"};
  EXPECT_EQ(code_of([&] { run_pipeline(c); }), ErrorCode::UnknownVariable);
  c = separable_config();
  c.factors = {};
  EXPECT_EQ(code_of([&] { run_pipeline(c); }), ErrorCode::BadConfig);
  c = separable_config();
  c.factors = {"night_lst"};
  EXPECT_EQ(code_of([&] { run_pipeline(c); }), ErrorCode::BadConfig);
  c = separable_config();
  c.panel_path = "/nonexistent.csv";
  EXPECT_EQ(code_of([&] { run_pipeline(c); }), ErrorCode::IoError);
  // Trends need no factors.
  c = separable_config();
  c.factors = {};
  EXPECT_NO_THROW(run_pipeline(c, Stage::Trends));
}

TEST(Pipeline, PanelDimensionTooLargeForGroups) {
  // 22 regions x 19 years: p = 19 with 11 + 11 observations leaves df2 = 2.
  PipelineConfig c;
  c.panel_path = kDataDir + "/demo_22x19.csv";
  c.factors = {"ndbi"};
  c.permutations = 0;
  const auto report = run_pipeline(c);
  EXPECT_EQ(report.tests[0].result.df1, 19);
  EXPECT_EQ(report.tests[0].result.df2, 2);
}

TEST(Pipeline, ErrorsCarryStageName) {
  // A constant factor breaks the correlation stage.
  const StudyPanel p({"a", "b", "c", "d"}, {1, 2, 3}, {"t", "f"},
                     {1, 0, 2, 0, 3, 0, 3, 0, 2, 0, 1, 0, 1, 0, 3, 0, 2, 0, 2, 0, 1, 0, 3, 0});
  PipelineConfig c;
  c.target = "t";
  c.factors = {"f"};
  try {
    run_pipeline(c, p, Stage::Correlate);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroVariance);
    EXPECT_EQ(e.detail().rfind("stage 'correlate'", 0), 0u) << e.detail();
  }
}

TEST(BuildGroupedSamples, PanelOrderAndLabels) {
  const StudyPanel p({"z", "a", "m", "b"}, {1, 2}, {"f"}, {1, 2, 3, 4, 5, 6, 7, 8});
  Grouping g;
  g.increasing = {"a", "z"};
  g.non_increasing = {"b", "m"};
  const auto s = build_grouped_samples(p, g, "f", false);
  EXPECT_EQ(s.labels1, (std::vector<std::string>{"z", "a"}));
  EXPECT_EQ(s.labels2, (std::vector<std::string>{"m", "b"}));
  EXPECT_EQ(s.group1[1], (Observation{3, 4}));
  g.increasing = {"a"};
  g.non_increasing = {"b", "m", "z"};
  EXPECT_EQ(code_of([&] { build_grouped_samples(p, g, "f", false); }),
            ErrorCode::DegenerateGrouping);
}

TEST(Report, DeterministicApartFromTimestamp) {
  const auto a = report_to_json(run_pipeline(separable_config()));
  const auto b = report_to_json(run_pipeline(separable_config()));
  auto strip = [](nlohmann::ordered_json j) {
    j["provenance"].erase("timestamp");
    return j.dump();
  };
  EXPECT_EQ(strip(a), strip(b));
  EXPECT_EQ(a["tests"]["f1"]["verdict"], "Causal");
  EXPECT_TRUE(a["tests"]["f1"].contains("permutation"));
}

TEST(Report, TrendsCsvRoundTrip) {
  const auto report = run_pipeline(separable_config(), Stage::Trends);
  const auto back = parse_trends_csv(trends_csv(report.trends));
  EXPECT_EQ(back, report.trends);
}

TEST(Report, TestsCsvColumns) {
  const auto report = run_pipeline(separable_config());
  const std::string csv = tests_csv(report.tests);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "factor,t2,f_stat,df1,df2,p_value,verdict");
}

TEST(Report, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.25), "0.25");
}

TEST(Report, MarkdownCarriesCaveat) {
  const auto md = report_markdown(run_pipeline(separable_config()));
  EXPECT_NE(md.find(std::string(kCaveat)), std::string::npos);
}

TEST(Report, EmitWritesRequestedFiles) {
  const fs::path dir = fs::temp_directory_path() / "heatpanel_emit_test";
  fs::remove_all(dir);
  const auto report = run_pipeline(separable_config());
  const auto written = emit_report(report, separable_config().formats, dir);
  for (const char* name : {"report.json", "trends.csv", "grouping.csv", "correlations.csv",
                           "tests.csv", "breaks.csv", "report.md"}) {
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  }
  EXPECT_EQ(written.size(), 7u);
  const std::string trends = slurp(dir / "trends.csv");
  EXPECT_EQ(trends.find('\r'), std::string::npos);
  fs::remove_all(dir);

  const fs::path blocked = dir / "file";
  fs::create_directories(dir);
  std::ofstream(blocked) << "x";
  EXPECT_EQ(code_of([&] { emit_report(report, {OutputFormat::Json}, blocked / "sub"); }),
            ErrorCode::IoError);
  fs::remove_all(dir);
}

TEST(Config, SettingsAndErrors) {
  PipelineConfig c;
  apply_config_text(c,
                    "# comment\n"
                    "target = lst\n"
                    "factors = a, b ,c\n"
                    "threshold = 0.064\n"
                    "alpha=0.05\n"
                    "breaks_k = 4\n"
                    "standardize = true\n"
                    "perms = 0\n"
                    "formats = json,md\n");
  EXPECT_EQ(c.target, "lst");
  EXPECT_EQ(c.factors, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(c.threshold_policy, ThresholdPolicy{FixedThreshold{0.064}});
  EXPECT_EQ(c.alpha, 0.05);
  EXPECT_EQ(c.breaks_k, 4);
  EXPECT_TRUE(c.standardize);
  EXPECT_EQ(c.permutations, 0);
  EXPECT_EQ(c.formats, (std::vector<OutputFormat>{OutputFormat::Json, OutputFormat::Markdown}));

  EXPECT_EQ(parse_threshold("median"), ThresholdPolicy{MedianOfTrends{}});
  EXPECT_TRUE(std::isinf(std::get<FixedThreshold>(parse_threshold("inf")).value));
  EXPECT_EQ(code_of([&] { apply_setting(c, "colour", "red"); }), ErrorCode::BadConfig);
  EXPECT_EQ(code_of([&] { apply_setting(c, "alpha", "abc"); }), ErrorCode::BadConfig);
  EXPECT_EQ(code_of([&] { apply_config_text(c, "no equals sign\n"); }), ErrorCode::BadConfig);
  EXPECT_EQ(code_of([&] { parse_formats("json,xml"); }), ErrorCode::BadConfig);
}

TEST(Config, RelativePanelPathResolvesAgainstConfigFile) {
  const fs::path dir = fs::temp_directory_path() / "heatpanel_config_test";
  fs::create_directories(dir);
  std::ofstream(dir / "run.conf") << "panel = panel.csv\n";
  PipelineConfig c;
  apply_config_file(c, (dir / "run.conf").string());
  EXPECT_EQ(fs::path(c.panel_path), dir / "panel.csv");
  fs::remove_all(dir);
  EXPECT_EQ(code_of([&] { apply_config_file(c, "/nonexistent/run.conf"); }),
            ErrorCode::BadConfig);
}

}  // namespace
}  // namespace heatpanel
