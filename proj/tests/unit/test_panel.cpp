#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "heatpanel/error.hpp"
#include "heatpanel/panel.hpp"

namespace heatpanel {
namespace {

const std::string kMinimal =
    "region_id,year,variable,value\n"
    "A,2001,x,1.0\n"
    "A,2002,x,2.0\n"
    "B,2001,x,3.0\n"
    "B,2002,x,4.5\n";

ErrorCode code_of(const std::string& text) {
  try {
    parse_panel_csv(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorCode::IoError;
}

TEST(ParsePanel, MinimalRectangle) {
  const auto p = parse_panel_csv(kMinimal);
  EXPECT_EQ(p.regions(), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(p.years(), (std::vector<int>{2001, 2002}));
  EXPECT_EQ(p.variables(), (std::vector<std::string>{"x"}));
  EXPECT_EQ(p.at(1, 1, 0), 4.5);
  EXPECT_EQ(p.at(0, 0, 0), 1.0);
}

TEST(ParsePanel, MissingRowIsIncomplete) {
  const std::string text = kMinimal.substr(0, kMinimal.rfind("B,2002"));
  try {
    parse_panel_csv(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IncompletePanel);
    EXPECT_NE(e.detail().find("(B, 2002, x)"), std::string::npos) << e.detail();
  }
}

TEST(ParsePanel, DuplicateCell) {
  EXPECT_EQ(code_of(kMinimal + "A,2001,x,9\n"), ErrorCode::DuplicateCell);
}

TEST(ParsePanel, MalformedInputs) {
  EXPECT_EQ(code_of(""), ErrorCode::MalformedCsv);
  EXPECT_EQ(code_of("region,year,variable,value\nA,2001,x,1\n"), ErrorCode::MalformedCsv);
  EXPECT_EQ(code_of("region_id,year,variable,value\n"), ErrorCode::MalformedCsv);
  EXPECT_EQ(code_of("region_id,year,variable,value\nA,2001,x\n"), ErrorCode::MalformedCsv);
  EXPECT_EQ(code_of("region_id,year,variable,value\nA,20x1,x,1\n"), ErrorCode::MalformedCsv);
  EXPECT_EQ(code_of("region_id,year,variable,value\nA,2001,x,abc\n"), ErrorCode::MalformedCsv);
  EXPECT_EQ(code_of("region_id,year,variable,value\nA,2001,x,\n"), ErrorCode::MalformedCsv);
  EXPECT_EQ(code_of("region_id,year,variable,value\n\"A,2001,x,1\n"), ErrorCode::MalformedCsv);
}

TEST(ParsePanel, NonFiniteValues) {
  EXPECT_EQ(code_of("region_id,year,variable,value\nA,2001,x,nan\n"), ErrorCode::NonFiniteValue);
  EXPECT_EQ(code_of("region_id,year,variable,value\nA,2001,x,inf\n"), ErrorCode::NonFiniteValue);
  EXPECT_EQ(code_of("region_id,year,variable,value\nA,2001,x,1e999\n"),
            ErrorCode::NonFiniteValue);
}

TEST(ParsePanel, AcceptsBomCrlfQuotesAndBlankLines) {
  const std::string text =
      "\xEF\xBB\xBFregion_id,year,variable,value\r\n"
      "\"A\",2001,x,1.0\r\n"
      "\r\n"
      "A,2002,x,+2.0\r\n";
  const auto p = parse_panel_csv(text);
  EXPECT_EQ(p.regions(), (std::vector<std::string>{"A"}));
  EXPECT_EQ(p.at(0, 1, 0), 2.0);
}

TEST(ParsePanel, QuotedFieldWithComma) {
  const auto p = parse_panel_csv(
      "region_id,year,variable,value\n\"North, upper\",2001,x,1\n");
  EXPECT_EQ(p.regions().front(), "North, upper");
}

TEST(ParsePanel, RowOrderDoesNotMatter) {
  std::vector<std::string> rows;
  for (const char* region : {"r1", "r2", "r3"}) {
    for (int year : {2010, 2011, 2012}) {
      for (const char* v : {"a", "b"}) {
        rows.push_back(std::string(region) + "," + std::to_string(year) + "," + v + "," +
                       std::to_string(year * 3 + (v[0] - 'a')));
      }
    }
  }
  auto join = [](const std::vector<std::string>& rs) {
    std::string out = "region_id,year,variable,value\n";
    for (const auto& r : rs) out += r + "\n";
    return out;
  };
  const auto reference = parse_panel_csv(join(rows));
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto shuffled = rows;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto p = parse_panel_csv(join(shuffled));
    // Years are sorted; cell values agree whatever the appearance order.
    EXPECT_EQ(p.years(), reference.years());
    for (const auto& region : reference.regions()) {
      for (const auto& v : reference.variables()) {
        EXPECT_EQ(extract_series(p, region, v).values,
                  extract_series(reference, region, v).values);
      }
    }
  }
}

TEST(ParsePanel, EmitRoundTrip) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal(0.0, 1e3);
  std::vector<double> values(4 * 3 * 2);
  for (double& x : values) x = normal(rng);
  const StudyPanel p({"a", "b", "c", "d"}, {1999, 2000, 2005}, {"u", "v"}, values);
  const std::string text = emit_panel_csv(p);
  const auto back = parse_panel_csv(text);
  EXPECT_EQ(back, p);
  EXPECT_EQ(emit_panel_csv(back), text);
}

double grid_value(int r, int y, int k) {
  return r * 1000 + (y - 2000) * 10 + k + ((r * 7 + y * 3 + k * 11) % 97) / 100.0;
}

TEST(ParsePanel, GridFixture) {
  const auto p = read_panel_csv(std::string(HEATPANEL_DATA_DIR) + "/grid_22x19x7.csv");
  ASSERT_EQ(p.region_count(), 22u);
  ASSERT_EQ(p.year_count(), 19u);
  ASSERT_EQ(p.variable_count(), 7u);
  EXPECT_EQ(p.years().front(), 2003);
  EXPECT_EQ(p.years().back(), 2021);
  EXPECT_EQ(p.variables().back(), "night_lst");
  for (std::size_t r = 0; r < 22; ++r) {
    EXPECT_EQ(p.regions()[r], std::to_string(r + 1));
    for (std::size_t y = 0; y < 19; ++y) {
      for (std::size_t k = 0; k < 7; ++k) {
        ASSERT_EQ(p.at(r, y, k),
                  grid_value(static_cast<int>(r), p.years()[y], static_cast<int>(k)));
      }
    }
  }
  EXPECT_TRUE(validate(p).ok);
}

TEST(ParsePanel, MissingFileIsIoError) {
  try {
    read_panel_csv("/nonexistent/panel.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(StudyPanel, ShapeMismatchThrows) {
  EXPECT_THROW(StudyPanel({"a"}, {1, 2}, {"x"}, {1.0}), Error);
}

TEST(ExtractSeries, ValuesAndErrors) {
  const auto p = parse_panel_csv(kMinimal);
  const auto s = extract_series(p, "B", "x");
  EXPECT_EQ(s.times, (std::vector<int>{2001, 2002}));
  EXPECT_EQ(s.values, (std::vector<double>{3.0, 4.5}));
  try {
    extract_series(p, "C", "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownRegion);
  }
  try {
    extract_series(p, "A", "y");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownVariable);
  }
}

TEST(Validate, ConstantSeriesIsWarning) {
  const StudyPanel p({"a", "b"}, {1, 2, 3}, {"x"}, {1, 1, 1, 1, 2, 3});
  const auto report = validate(p);
  EXPECT_TRUE(report.ok);
  EXPECT_EQ(report.error_count(), 0u);
  EXPECT_EQ(report.warning_count(), 1u);
}

TEST(Validate, NonFiniteSmuggledThroughConstructor) {
  const StudyPanel p({"a"}, {1, 2}, {"x"}, {1.0, std::nan("")});
  const auto report = validate(p);
  EXPECT_FALSE(report.ok);
  ASSERT_EQ(report.error_count(), 1u);
  EXPECT_EQ(report.issues.front().message.rfind("NonFiniteValue", 0), 0u);
}

TEST(Validate, StructuralProblems) {
  EXPECT_FALSE(validate(StudyPanel({"a", "a"}, {1}, {"x"}, {1, 2})).ok);
  EXPECT_FALSE(validate(StudyPanel({"a"}, {2, 1}, {"x"}, {1, 2})).ok);
  EXPECT_FALSE(validate(StudyPanel()).ok);
  const auto single_year = validate(StudyPanel({"a"}, {1}, {"x"}, {1}));
  EXPECT_TRUE(single_year.ok);
  EXPECT_EQ(single_year.warning_count(), 1u);
}

}  // namespace
}  // namespace heatpanel
