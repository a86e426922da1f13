#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heatpanel/assoc.hpp"
#include "heatpanel/breaks.hpp"
#include "heatpanel/error.hpp"
#include "heatpanel/hotelling.hpp"
#include "heatpanel/numerics.hpp"
#include "heatpanel/panel.hpp"
#include "heatpanel/pipeline.hpp"
#include "heatpanel/report.hpp"
#include "heatpanel/trend.hpp"

namespace py = pybind11;
using namespace heatpanel;

namespace {

GroupedSamples make_samples(std::vector<Observation> group1, std::vector<Observation> group2) {
  GroupedSamples s;
  s.group1 = std::move(group1);
  s.group2 = std::move(group2);
  return s;
}

TimeSeries make_series(std::vector<int> times, std::vector<double> values) {
  return TimeSeries{"", "", std::move(times), std::move(values)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Panel trend grouping, Pearson screening and two-sample Hotelling T-squared tests";
  m.attr("__version__") = std::string(kVersion);

  // Messages carry the error code as a "[Code] " prefix.
  py::register_exception<Error>(m, "HeatpanelError", PyExc_ValueError);

  // panel
  py::class_<StudyPanel>(m, "StudyPanel")
      .def_property_readonly("regions", &StudyPanel::regions)
      .def_property_readonly("years", &StudyPanel::years)
      .def_property_readonly("variables", &StudyPanel::variables)
      .def("at", [](const StudyPanel& p, std::size_t r, std::size_t y, std::size_t v) {
        if (r >= p.region_count() || y >= p.year_count() || v >= p.variable_count()) {
          throw py::index_error("panel index out of range");
        }
        return p.at(r, y, v);
      })
      .def(py::self == py::self);

  py::class_<TimeSeries>(m, "TimeSeries")
      .def(py::init(&make_series), py::arg("times"), py::arg("values"))
      .def_readonly("region", &TimeSeries::region)
      .def_readonly("variable", &TimeSeries::variable)
      .def_readonly("times", &TimeSeries::times)
      .def_readonly("values", &TimeSeries::values);

  py::class_<ValidationIssue>(m, "ValidationIssue")
      .def_property_readonly("severity",
                             [](const ValidationIssue& i) {
                               return i.severity == Severity::Error ? "error" : "warning";
                             })
      .def_readonly("location", &ValidationIssue::location)
      .def_readonly("message", &ValidationIssue::message);
  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("ok", &ValidationReport::ok)
      .def_readonly("issues", &ValidationReport::issues);

  m.def("parse_panel_csv", [](const std::string& text) { return parse_panel_csv(text); },
        py::arg("text"));
  m.def("read_panel_csv", &read_panel_csv, py::arg("path"));
  m.def("emit_panel_csv", &emit_panel_csv, py::arg("panel"));
  m.def("extract_series",
        [](const StudyPanel& p, const std::string& r, const std::string& v) {
          return extract_series(p, r, v);
        },
        py::arg("panel"), py::arg("region"), py::arg("variable"));
  m.def("validate", &validate, py::arg("panel"));

  // trend
  py::class_<TrendEstimate>(m, "TrendEstimate")
      .def_readonly("region", &TrendEstimate::region)
      .def_readonly("slope", &TrendEstimate::slope)
      .def_readonly("intercept", &TrendEstimate::intercept)
      .def_readonly("n_points", &TrendEstimate::n_points);
  py::class_<Grouping>(m, "Grouping")
      .def_readonly("increasing", &Grouping::increasing)
      .def_readonly("non_increasing", &Grouping::non_increasing)
      .def_readonly("threshold", &Grouping::threshold);

  m.def("ols_trend", &ols_trend, py::arg("series"));
  m.def("estimate_trends", &estimate_trends, py::arg("panel"), py::arg("target"));
  m.def("median_threshold", &median_threshold, py::arg("trends"));
  m.def("classify_trends", &classify_trends, py::arg("trends"), py::arg("threshold"));

  // assoc
  py::class_<CorrelationRow>(m, "CorrelationRow")
      .def_readonly("region", &CorrelationRow::region)
      .def_readonly("coefficients", &CorrelationRow::coefficients);
  py::class_<CorrelationTable>(m, "CorrelationTable")
      .def_readonly("target", &CorrelationTable::target)
      .def_readonly("factors", &CorrelationTable::factors)
      .def_readonly("rows", &CorrelationTable::rows)
      .def("column", &CorrelationTable::column);
  m.def("pearson",
        [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
        py::arg("x"), py::arg("y"));
  m.def("correlation_table", &correlation_table, py::arg("panel"), py::arg("target"),
        py::arg("factors"));

  // numerics
  m.def("solve_spd",
        [](std::vector<std::vector<double>> rows, const std::vector<double>& v) {
          std::vector<double> flat;
          for (const auto& row : rows) {
            if (row.size() != rows.size()) throw py::value_error("matrix must be square");
            flat.insert(flat.end(), row.begin(), row.end());
          }
          return numerics::solve_spd(numerics::SpdMatrix(rows.size(), std::move(flat)), v);
        },
        py::arg("matrix"), py::arg("rhs"));
  m.def("ln_gamma", &numerics::ln_gamma, py::arg("x"));
  m.def("reg_incomplete_beta", &numerics::reg_incomplete_beta, py::arg("x"), py::arg("a"),
        py::arg("b"));
  m.def("f_cdf", [](double x, int d1, int d2) { return numerics::f_cdf(x, {d1, d2}); },
        py::arg("x"), py::arg("df1"), py::arg("df2"));
  m.def("f_sf", [](double x, int d1, int d2) { return numerics::f_sf(x, {d1, d2}); },
        py::arg("x"), py::arg("df1"), py::arg("df2"));

  // stat-test
  py::class_<HotellingResult>(m, "HotellingResult")
      .def_readonly("t2", &HotellingResult::t2)
      .def_readonly("f_stat", &HotellingResult::f_stat)
      .def_readonly("df1", &HotellingResult::df1)
      .def_readonly("df2", &HotellingResult::df2)
      .def_readonly("p_value", &HotellingResult::p_value)
      .def_readonly("alpha", &HotellingResult::alpha)
      .def_readonly("ridge_lambda", &HotellingResult::ridge_lambda)
      .def_property_readonly("verdict", [](const HotellingResult& r) {
        return std::string(to_string(r.verdict));
      });
  py::class_<PermutationEstimate>(m, "PermutationEstimate")
      .def_readonly("p_hat", &PermutationEstimate::p_hat)
      .def_readonly("n_permutations", &PermutationEstimate::n_permutations)
      .def_readonly("exact", &PermutationEstimate::exact)
      .def_readonly("seed", &PermutationEstimate::seed);

  m.def("pooled_covariance",
        [](std::vector<Observation> g1, std::vector<Observation> g2) {
          const auto s = pooled_covariance(make_samples(std::move(g1), std::move(g2)));
          std::vector<std::vector<double>> rows(s.order(), std::vector<double>(s.order()));
          for (std::size_t i = 0; i < s.order(); ++i) {
            for (std::size_t j = 0; j < s.order(); ++j) rows[i][j] = s(i, j);
          }
          return rows;
        },
        py::arg("group1"), py::arg("group2"));
  m.def("hotelling_t2",
        [](std::vector<Observation> g1, std::vector<Observation> g2, double ridge) {
          return hotelling_t2(make_samples(std::move(g1), std::move(g2)), ridge);
        },
        py::arg("group1"), py::arg("group2"), py::arg("ridge_lambda") = 0.0);
  m.def("t2_to_f",
        [](double t2, int n1, int n2, int p) {
          const auto f = t2_to_f(t2, n1, n2, p);
          return py::make_tuple(f.f_stat, f.df1, f.df2);
        },
        py::arg("t2"), py::arg("n1"), py::arg("n2"), py::arg("p"));
  m.def("hotelling_test",
        [](std::vector<Observation> g1, std::vector<Observation> g2, double alpha, double ridge) {
          return hotelling_test(make_samples(std::move(g1), std::move(g2)), alpha, ridge);
        },
        py::arg("group1"), py::arg("group2"), py::arg("alpha") = 0.01,
        py::arg("ridge_lambda") = 0.0);
  m.def("permutation_pvalue",
        [](std::vector<Observation> g1, std::vector<Observation> g2, std::int64_t n,
           std::uint64_t seed, double ridge) {
          return permutation_pvalue(make_samples(std::move(g1), std::move(g2)), n, seed, ridge);
        },
        py::arg("group1"), py::arg("group2"), py::arg("n_permutations") = 9999,
        py::arg("seed") = 42, py::arg("ridge_lambda") = 0.0);
  m.def("decide", [](double p, double alpha) { return std::string(to_string(decide(p, alpha))); },
        py::arg("p_value"), py::arg("alpha"));

  // breaks
  py::class_<BreaksClassification>(m, "BreaksClassification")
      .def_readonly("k", &BreaksClassification::k)
      .def_readonly("boundaries", &BreaksClassification::boundaries)
      .def_readonly("labels", &BreaksClassification::labels)
      .def_readonly("sdcm", &BreaksClassification::sdcm);
  m.def("jenks_breaks", &jenks_breaks, py::arg("values"), py::arg("k") = 5);
  m.def("assign_classes", &assign_classes, py::arg("values"), py::arg("boundaries"));

  // driver: run the pipeline from a key=value style dict and return report.json
  m.def(
      "run_pipeline",
      [](const std::string& panel_path, const std::string& target,
         const std::vector<std::string>& factors, py::object threshold, double alpha,
         int breaks_k, double ridge, bool standardize, std::int64_t perms, std::uint64_t seed) {
        PipelineConfig config;
        config.panel_path = panel_path;
        config.target = target;
        config.factors = factors;
        if (!threshold.is_none()) config.threshold_policy = FixedThreshold{threshold.cast<double>()};
        config.alpha = alpha;
        config.breaks_k = breaks_k;
        config.ridge_lambda = ridge;
        config.standardize = standardize;
        config.permutations = perms;
        config.seed = seed;
        AnalysisReport report;
        {
          py::gil_scoped_release release;
          report = run_pipeline(config);
        }
        return report_to_json(report).dump();
      },
      py::arg("panel_path"), py::arg("target"), py::arg("factors"),
      py::arg("threshold") = py::none(), py::arg("alpha") = 0.01, py::arg("breaks_k") = 5,
      py::arg("ridge_lambda") = 0.0, py::arg("standardize") = false, py::arg("perms") = 9999,
      py::arg("seed") = 42,
      "Runs the full pipeline and returns the report as a JSON string.");
}
