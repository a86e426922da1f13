#include "heatpanel/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "heatpanel/config.hpp"
#include "heatpanel/error.hpp"

namespace heatpanel {

using nlohmann::ordered_json;

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Non-finite numbers have no JSON form; they are written as strings.
ordered_json number(double value) {
  if (std::isfinite(value)) return value;
  return format_double(value);
}

ordered_json permutation_json(const PermutationEstimate& p) {
  return {{"p_hat", p.p_hat},
          {"n_permutations", p.n_permutations},
          {"exact", p.exact},
          {"seed", p.seed}};
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << body;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

std::string threshold_policy_name(const ThresholdPolicy& policy) {
  return std::holds_alternative<MedianOfTrends>(policy) ? "median" : "fixed";
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json config_to_json(const PipelineConfig& config) {
  ordered_json j;
  j["panel"] = config.panel_path;
  j["target"] = config.target;
  j["factors"] = config.factors;
  j["threshold_policy"] = threshold_policy_name(config.threshold_policy);
  if (const auto* fixed = std::get_if<FixedThreshold>(&config.threshold_policy)) {
    j["threshold"] = number(fixed->value);
  }
  j["alpha"] = config.alpha;
  j["breaks_k"] = config.breaks_k;
  j["ridge_lambda"] = config.ridge_lambda;
  j["standardize"] = config.standardize;
  j["permutations"] = config.permutations;
  j["seed"] = config.seed;
  ordered_json formats = ordered_json::array();
  for (const auto f : config.formats) formats.push_back(std::string(to_string(f)));
  j["formats"] = formats;
  return j;
}

ordered_json validation_to_json(const ValidationReport& report) {
  ordered_json issues = ordered_json::array();
  for (const auto& i : report.issues) {
    issues.push_back({{"severity", i.severity == Severity::Error ? "error" : "warning"},
                      {"location", i.location},
                      {"message", i.message}});
  }
  return {{"ok", report.ok}, {"issues", issues}};
}

ordered_json report_to_json(const AnalysisReport& report) {
  ordered_json j;
  j["provenance"] = {{"tool", report.provenance.tool},
                     {"version", report.provenance.version},
                     {"stage", report.provenance.stage},
                     {"timestamp", report.provenance.timestamp},
                     {"config", config_to_json(report.config)}};
  j["validation"] = validation_to_json(report.validation);

  if (!report.trends.empty()) {
    ordered_json trends = ordered_json::array();
    for (const auto& t : report.trends) {
      trends.push_back({{"region", t.region},
                        {"slope", t.slope},
                        {"intercept", t.intercept},
                        {"n_points", t.n_points}});
    }
    j["trends"] = trends;
  }
  if (report.threshold) j["threshold"] = number(*report.threshold);
  if (report.grouping) {
    j["grouping"] = {{"threshold", number(report.grouping->threshold)},
                     {"increasing", report.grouping->increasing},
                     {"non_increasing", report.grouping->non_increasing}};
  }
  if (report.correlations) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : report.correlations->rows) {
      rows.push_back({{"region", row.region}, {"coefficients", row.coefficients}});
    }
    j["correlations"] = {{"target", report.correlations->target},
                         {"factors", report.correlations->factors},
                         {"rows", rows}};
  }
  if (!report.breaks.empty()) {
    ordered_json breaks = ordered_json::object();
    for (const auto& b : report.breaks) {
      breaks[b.factor] = {{"k", b.classes.k},
                          {"boundaries", b.classes.boundaries},
                          {"labels", b.classes.labels},
                          {"sdcm", b.classes.sdcm}};
    }
    j["breaks"] = breaks;
  }
  if (!report.tests.empty()) {
    ordered_json tests = ordered_json::object();
    for (const auto& t : report.tests) {
      ordered_json entry = {{"n1", t.n1},
                            {"n2", t.n2},
                            {"t2", t.result.t2},
                            {"f_stat", t.result.f_stat},
                            {"df1", t.result.df1},
                            {"df2", t.result.df2},
                            {"p_value", t.result.p_value},
                            {"alpha", t.result.alpha},
                            {"verdict", std::string(to_string(t.result.verdict))},
                            {"ridge_lambda", t.result.ridge_lambda}};
      if (t.permutation) entry["permutation"] = permutation_json(*t.permutation);
      tests[t.factor] = entry;
    }
    j["tests"] = tests;
    j["caveat"] = std::string(kCaveat);
  }
  return j;
}

std::string trends_csv(const std::vector<TrendEstimate>& trends) {
  std::string out = "region,slope,intercept,n_points\n";
  for (const auto& t : trends) {
    out += csv_field(t.region) + "," + format_double(t.slope) + "," + format_double(t.intercept) +
           "," + std::to_string(t.n_points) + "\n";
  }
  return out;
}

std::string grouping_csv(const AnalysisReport& report) {
  std::string out = "region,slope,threshold,group\n";
  const auto& g = *report.grouping;
  for (const auto& t : report.trends) {
    out += csv_field(t.region) + "," + format_double(t.slope) + "," + format_double(g.threshold) +
           "," + (g.is_increasing(t.region) ? "increasing" : "non_increasing") + "\n";
  }
  return out;
}

std::string correlations_csv(const CorrelationTable& table) {
  std::string out = "region";
  for (const auto& f : table.factors) out += "," + csv_field(f);
  out += "\n";
  for (const auto& row : table.rows) {
    out += csv_field(row.region);
    for (const double r : row.coefficients) out += "," + format_double(r);
    out += "\n";
  }
  return out;
}

std::string tests_csv(const std::vector<FactorTest>& tests) {
  std::string out = "factor,t2,f_stat,df1,df2,p_value,verdict\n";
  for (const auto& t : tests) {
    out += csv_field(t.factor) + "," + format_double(t.result.t2) + "," +
           format_double(t.result.f_stat) + "," + std::to_string(t.result.df1) + "," +
           std::to_string(t.result.df2) + "," + format_double(t.result.p_value) + "," +
           std::string(to_string(t.result.verdict)) + "\n";
  }
  return out;
}

std::string breaks_csv(const AnalysisReport& report) {
  std::string out = "factor,region,correlation,class\n";
  const auto& table = *report.correlations;
  for (const auto& b : report.breaks) {
    const auto f = static_cast<std::size_t>(
        std::find(table.factors.begin(), table.factors.end(), b.factor) - table.factors.begin());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      out += csv_field(b.factor) + "," + csv_field(table.rows[r].region) + "," +
             format_double(table.rows[r].coefficients[f]) + "," +
             std::to_string(b.classes.labels[r]) + "\n";
    }
  }
  return out;
}

std::string report_markdown(const AnalysisReport& report) {
  std::ostringstream md;
  const auto& cfg = report.config;
  md << "# heatpanel report\n\n";
  md << "> " << kCaveat << "\n\n";
  md << "- target: `" << cfg.target << "`\n";
  if (!cfg.factors.empty()) {
    md << "- factors:";
    for (const auto& f : cfg.factors) md << " `" << f << "`";
    md << "\n";
  }
  md << "- regions: " << report.regions.size() << "\n";
  md << "- alpha: " << format_double(cfg.alpha) << "\n";
  md << "- threshold policy: " << threshold_policy_name(cfg.threshold_policy) << "\n";
  if (cfg.ridge_lambda > 0.0) md << "- ridge lambda: " << format_double(cfg.ridge_lambda) << "\n";
  if (cfg.standardize) md << "- observations standardized per year\n";
  md << "- validation: " << (report.validation.ok ? "ok" : "failed") << ", "
     << report.validation.warning_count() << " warning(s)\n\n";

  if (!report.trends.empty()) {
    md << "## Trends\n\n| region | slope | mean |";
    if (report.grouping) md << " group |";
    md << "\n|---|---|---|" << (report.grouping ? "---|" : "") << "\n";
    for (const auto& t : report.trends) {
      md << "| " << t.region << " | " << format_double(t.slope) << " | "
         << format_double(t.intercept) << " |";
      if (report.grouping) {
        md << " " << (report.grouping->is_increasing(t.region) ? "increasing" : "non-increasing")
           << " |";
      }
      md << "\n";
    }
    md << "\n";
    if (report.threshold) md << "Threshold: " << format_double(*report.threshold) << "\n\n";
  }
  if (report.grouping) {
    md << "Increasing (" << report.grouping->increasing.size() << "):";
    for (const auto& r : report.grouping->increasing) md << " " << r;
    md << "\n\nNon-increasing (" << report.grouping->non_increasing.size() << "):";
    for (const auto& r : report.grouping->non_increasing) md << " " << r;
    md << "\n\n";
  }
  if (report.correlations) {
    const auto& table = *report.correlations;
    md << "## Correlation with `" << table.target << "`\n\n| region |";
    for (const auto& f : table.factors) md << " " << f << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < table.factors.size(); ++i) md << "---|";
    md << "\n";
    for (const auto& row : table.rows) {
      md << "| " << row.region << " |";
      for (const double r : row.coefficients) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", r);
        md << " " << buf << " |";
      }
      md << "\n";
    }
    md << "\n";
  }
  if (!report.breaks.empty()) {
    md << "## Natural breaks\n\n| factor | k | boundaries | sdcm |\n|---|---|---|---|\n";
    for (const auto& b : report.breaks) {
      md << "| " << b.factor << " | " << b.classes.k << " |";
      for (std::size_t i = 0; i < b.classes.boundaries.size(); ++i) {
        md << (i == 0 ? " " : ", ") << format_double(b.classes.boundaries[i]);
      }
      md << " | " << format_double(b.classes.sdcm) << " |\n";
    }
    md << "\n";
  }
  if (!report.tests.empty()) {
    md << "## Hotelling T-squared\n\n"
       << "| factor | N1 | N2 | T2 | F | df | p-value | permutation p | verdict |\n"
       << "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& t : report.tests) {
      md << "| " << t.factor << " | " << t.n1 << " | " << t.n2 << " | "
         << format_double(t.result.t2) << " | " << format_double(t.result.f_stat) << " | ("
         << t.result.df1 << ", " << t.result.df2 << ") | " << format_double(t.result.p_value)
         << " | "
         << (t.permutation ? format_double(t.permutation->p_hat) +
                                 (t.permutation->exact ? " (exact)" : "")
                           : std::string("-"))
         << " | " << to_string(t.result.verdict) << " |\n";
    }
    md << "\n";
  }
  return md.str();
}

std::vector<TrendEstimate> parse_trends_csv(std::string_view text) {
  std::vector<TrendEstimate> trends;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      if (line != "region,slope,intercept,n_points") {
        throw Error(ErrorCode::MalformedCsv, "unexpected trends.csv header");
      }
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream row(line);
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 4) throw Error(ErrorCode::MalformedCsv, "bad trends.csv row: " + line);
    TrendEstimate t;
    t.region = fields[0];
    auto parse = [&](const std::string& f, auto& out) {
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), out);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw Error(ErrorCode::MalformedCsv, "bad number '" + f + "' in trends.csv");
      }
    };
    parse(fields[1], t.slope);
    parse(fields[2], t.intercept);
    parse(fields[3], t.n_points);
    trends.push_back(std::move(t));
  }
  return trends;
}

std::vector<std::filesystem::path> emit_report(const AnalysisReport& report,
                                               const std::vector<OutputFormat>& formats,
                                               const std::filesystem::path& output_dir) {
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) {
    throw Error(ErrorCode::IoError,
                "cannot create '" + output_dir.string() + "': " + ec.message());
  }
  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, const std::string& body) {
    const auto path = output_dir / name;
    write_file(path, body);
    written.push_back(path);
  };
  for (const auto format : formats) {
    switch (format) {
      case OutputFormat::Json:
        emit("report.json", report_to_json(report).dump(2) + "\n");
        break;
      case OutputFormat::Csv:
        if (!report.trends.empty()) emit("trends.csv", trends_csv(report.trends));
        if (report.grouping) emit("grouping.csv", grouping_csv(report));
        if (report.correlations) emit("correlations.csv", correlations_csv(*report.correlations));
        if (!report.tests.empty()) emit("tests.csv", tests_csv(report.tests));
        if (!report.breaks.empty()) emit("breaks.csv", breaks_csv(report));
        break;
      case OutputFormat::Markdown:
        emit("report.md", report_markdown(report));
        break;
    }
  }
  return written;
}

}  // namespace heatpanel
