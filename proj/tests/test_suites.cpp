#include "symplab/suites.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace symplab;
namespace fs = std::filesystem;

namespace {

// Validator for the JSON Schema keywords used by schemas/report.schema.json:
// type, enum, required, properties, additionalProperties (false), items, minimum, minItems.
bool type_matches(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  return false;
}

void validate(const json& v, const json& schema, const std::string& path, std::vector<std::string>& errors) {
  if (schema.contains("type")) {
    bool ok = false;
    if (schema["type"].is_array()) {
      for (const json& t : schema["type"]) ok = ok || type_matches(v, t.get<std::string>());
    } else {
      ok = type_matches(v, schema["type"].get<std::string>());
    }
    if (!ok) {
      errors.push_back(path + ": wrong type");
      return;
    }
  }
  if (schema.contains("enum") && std::find(schema["enum"].begin(), schema["enum"].end(), v) == schema["enum"].end()) {
    errors.push_back(path + ": not in enum");
  }
  if (schema.contains("minimum") && v.is_number() && v.get<double>() < schema["minimum"].get<double>()) {
    errors.push_back(path + ": below minimum");
  }
  if (v.is_object()) {
    for (const json& r : schema.value("required", json::array())) {
      if (!v.contains(r.get<std::string>())) errors.push_back(path + ": missing " + r.get<std::string>());
    }
    const json props = schema.value("properties", json::object());
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (props.contains(it.key())) {
        validate(it.value(), props[it.key()], path + "." + it.key(), errors);
      } else if (schema.contains("additionalProperties") && schema["additionalProperties"] == false) {
        errors.push_back(path + ": unexpected key " + it.key());
      }
    }
  }
  if (v.is_array()) {
    if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>()) errors.push_back(path + ": too few items");
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) validate(v[i], schema["items"], path + "[" + std::to_string(i) + "]", errors);
    }
  }
}

json load_schema() {
  std::ifstream in(std::string(SYMPLAB_SCHEMA_DIR) + "/report.schema.json");
  return json::parse(in);
}

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("symplab_test_" + name);
  fs::remove_all(p);
  return p;
}

bool has_check(const SuiteResult& r, const std::string& prefix) {
  return std::any_of(r.checks.begin(), r.checks.end(), [&](const Check& c) { return c.id.rfind(prefix, 0) == 0; });
}

}  // namespace

TEST(Suites, Model1DefaultsPassWithDensityAndPairingChecks) {
  const SuiteResult r = run_suite({"model1", json::object(), std::nullopt, ""});
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(has_check(r, "sigma_ml.density"));
  EXPECT_TRUE(has_check(r, "pushoff.minus_pairing[0.001]"));
  EXPECT_TRUE(has_check(r, "pushoff.plus_pairing[0.1]"));
}

TEST(Suites, SplittingD4ReportsCounts) {
  const SuiteResult r = run_suite({"splitting", {{"d", 4}}, 1, ""});
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.notes.at("g"), 3);
  EXPECT_EQ(r.notes.at("k"), 6);
}

TEST(Suites, SameSeedGivesIdenticalReports) {
  const fs::path a = temp_dir("det_a"), b = temp_dir("det_b");
  run_suite({"moser", json::object(), 7, a.string()});
  run_suite({"moser", json::object(), 7, b.string()});
  auto read = [](const fs::path& p) { return json::parse(std::ifstream(p / "moser.json")); };
  EXPECT_EQ(comparable(read(a)).dump(), comparable(read(b)).dump());
  const SuiteResult c = run_suite({"moser", json::object(), 8, ""});
  EXPECT_NE(comparable(result_to_json(c)).dump(), comparable(read(a)).dump());
}

TEST(Suites, ParameterErrors) {
  EXPECT_THROW(run_suite({"nonsense", json::object(), 1, ""}), SuiteError);
  EXPECT_THROW(run_suite({"model1", {{"gridd", 10}}, std::nullopt, ""}), SuiteError);
  EXPECT_THROW(run_suite({"model1", {{"grid", 1}}, std::nullopt, ""}), SuiteError);
  EXPECT_THROW(run_suite({"model1", {{"grid", "big"}}, std::nullopt, ""}), SuiteError);
  EXPECT_THROW(run_suite({"model1", {{"grid", 2.5}}, std::nullopt, ""}), SuiteError);
  EXPECT_THROW(run_suite({"moser", json::object(), std::nullopt, ""}), SuiteError);
  EXPECT_THROW(run_suite({"moser", {{"radius_flow", 1.0}}, 1, ""}), SuiteError);
  EXPECT_THROW(pipeline_check(1), SuiteError);
  EXPECT_THROW(pipeline_check(9), SuiteError);
}

TEST(Suites, OverallVerdictIsConjunctionOfChecks) {
  // An impossible tolerance must flip the verdict rather than be absorbed.
  const SuiteResult r = run_suite({"model1", {{"tol", 0.0}, {"grid", 50}}, std::nullopt, ""});
  const bool all = std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.report.pass; });
  EXPECT_EQ(r.pass, all);
}

TEST(Pipeline, NodeCountsAndOutOfScopeStamp) {
  for (auto [d, nodes] : {std::pair{2, 1}, std::pair{4, 6}}) {
    const SuiteResult r = pipeline_check(d);
    EXPECT_TRUE(r.pass) << d;
    EXPECT_EQ(r.notes.at("nodes_processed"), nodes);
    bool stamped = false;
    for (const json& st : r.notes.at("stages")) stamped = stamped || st.at("status") == "assumed, out of scope";
    EXPECT_TRUE(stamped);
  }
}

TEST(Reports, EverySuiteReportIsSchemaValid) {
  const json schema = load_schema();
  const fs::path dir = temp_dir("schema");
  for (const std::string& name : suite_names()) {
    json small = json::object();
    if (name == "orth") small = {{"samples", 2000}, {"families", 4}};
    if (name == "moser") small = {{"radial_points", 100}, {"identity_points", 50}, {"flow_points", 5}, {"pullback_points", 5}};
    const SuiteResult r = run_suite({name, small, 3, dir.string()});
    const json report = json::parse(std::ifstream(dir / (name + ".json")));
    std::vector<std::string> errors;
    validate(report, schema, name, errors);
    EXPECT_TRUE(errors.empty()) << name << ": " << (errors.empty() ? "" : errors.front());
    EXPECT_EQ(report.at("pass"), r.pass);
  }
  std::vector<std::string> errors;
  validate(json{{"suite", "model1"}}, schema, "bad", errors);
  EXPECT_FALSE(errors.empty());
}

TEST(Figures, WritesSvgAndCsvPairs) {
  const fs::path dir = temp_dir("figs");
  const auto files = emit_figures(dir.string());
  EXPECT_EQ(files.size(), 8u);
  std::set<std::string> names;
  for (const std::string& f : files) {
    EXPECT_TRUE(fs::exists(f));
    EXPECT_GT(fs::file_size(f), 100u);
    names.insert(fs::path(f).filename().string());
  }
  EXPECT_TRUE(names.count("fig2_slice.svg") && names.count("fig2_slice.csv"));
  EXPECT_TRUE(names.count("lemma_density_heatmap.svg"));
  std::ifstream svg(dir / "fig2_slice.svg");
  std::stringstream ss;
  ss << svg.rdbuf();
  std::size_t lines = 0;
  for (std::size_t pos = 0; (pos = ss.str().find("<polyline", pos)) != std::string::npos; ++pos) ++lines;
  EXPECT_EQ(lines, 4u);
}

TEST(Figures, GammaFigureIsMonotoneFromX1AxisToX2Axis) {
  const fs::path dir = temp_dir("figs_gamma");
  emit_figures(dir.string());
  std::ifstream csv(dir / "fig4_gamma.csv");
  std::string line;
  std::getline(csv, line);
  std::vector<std::pair<double, double>> pts;
  while (std::getline(csv, line)) {
    if (line.rfind("\"gamma\"", 0) != 0) continue;
    std::stringstream ls(line.substr(8));
    double x, y;
    char comma;
    ls >> x >> comma >> y;
    pts.emplace_back(x, y);
  }
  ASSERT_GT(pts.size(), 10u);
  EXPECT_NEAR(pts.front().second, 0.0, 1e-12);
  EXPECT_NEAR(pts.back().first, 0.0, 1e-12);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_LE(pts[i].first, pts[i - 1].first + 1e-12);
    EXPECT_GE(pts[i].second, pts[i - 1].second - 1e-12);
  }
}

TEST(Figures, UnwritablePathFails) {
  const fs::path file = temp_dir("figs_file");
  std::ofstream(file.string()) << "x";
  EXPECT_THROW(emit_figures((file / "sub").string()), std::runtime_error);
}
