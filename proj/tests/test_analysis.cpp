#include <doctest.h>

#include <cmath>
#include <sstream>

#include "propmeta/analysis.hpp"
#include "propmeta/csv.hpp"

using namespace propmeta;
using doctest::Approx;

namespace {

const std::vector<StudyRecord> kReversedPair{{"study 10", 32, 16557}, {"study 13", 1, 676}};
const std::vector<StudyRecord> kFour{{"A", 1, 10}, {"B", 10, 100}, {"C", 100, 1000}, {"D", 1000, 10000}};

bool has(const AnalysisReport& r, FindingKind kind) {
  for (const auto& f : r.diagnostics.findings) {
    if (f.kind == kind) return true;
  }
  return false;
}

std::string render(const AnalysisReport& r, OutputFormat fmt = OutputFormat::Json) {
  std::ostringstream out;
  write_report(out, r, fmt);
  return out.str();
}

}  // namespace

TEST_CASE("headline example with default configuration") {
  const auto r = run_analysis(kReversedPair, AnalysisConfig{});
  CHECK(r.rows.size() == 2);
  CHECK(r.back.implied_n == Approx(17233.5).epsilon(1e-12));
  CHECK(std::abs(r.back.p_hat - 0.00194) <= 1e-5);
  CHECK(r.back.p_hat == Approx(0.0019411730215015558).epsilon(1e-9));
  CHECK(has(r, FindingKind::PooledOutsideObservedRange));
  CHECK(has(r, FindingKind::OrderReversal));
  CHECK(has(r, FindingKind::PartialImageOverlap));
  CHECK_FALSE(has(r, FindingKind::NoPreimage));
  CHECK(exit_code(r) == 0);
  CHECK(r.back.ci_lo <= r.back.p_hat);
  CHECK(r.back.p_hat <= r.back.ci_hi);
}

TEST_CASE("four studies under the harmonic-mean convention") {
  AnalysisConfig c;
  c.convention = HarmonicMean{};
  const auto r = run_analysis(kFour, c);
  CHECK(r.back.implied_n == Approx(36.0).epsilon(0.1 / 36));
  CHECK(r.back.ci_hi < 0.10);
  CHECK(r.pooled.theta_hat == Approx(0.32197757256628653).epsilon(1e-12));
  CHECK(r.pooled.ci_hi == Approx(0.33127412619614671).epsilon(1e-12));
  CHECK(r.back.p_hat == Approx(0.089446602896292974).epsilon(1e-9));
  CHECK(r.back.ci_hi == Approx(0.095228262604827053).epsilon(1e-9));
}

TEST_CASE("four studies on the single arcsine scale") {
  AnalysisConfig c;
  c.transform = TransformKind::SingleArcsine;
  c.convention = HarmonicMean{};
  const auto r = run_analysis(kFour, c);
  CHECK(std::abs(r.pooled.theta_hat - std::asin(std::sqrt(0.1))) <= 1e-12);
  CHECK(r.back.p_hat == Approx(0.1).epsilon(1e-12));
  CHECK(r.back.ci_lo < 0.1);
  CHECK(r.back.ci_hi > 0.1);
  CHECK(r.diagnostics.findings.empty());
}

TEST_CASE("pooled point without preimage is an Error and sets exit code 2") {
  // Explicit small N makes the pooled theta unattainable.
  AnalysisConfig c;
  c.convention = Explicit{1.0};
  const std::vector<StudyRecord> rare{{"a", 0, 5000}, {"b", 0, 8000}};
  const auto r = run_analysis(rare, c);
  CHECK(r.back.clamped_point);
  CHECK(r.back.p_hat == 0.0);
  CHECK(has(r, FindingKind::NoPreimage));
  CHECK(r.diagnostics.has_errors());
  CHECK(exit_code(r) == 2);
}

TEST_CASE("disabled diagnostics serialize as null") {
  AnalysisConfig c;
  c.diagnostics_enabled = false;
  const auto r = run_analysis(kReversedPair, c);
  CHECK(r.diagnostics.findings.empty());
  const auto j = report_to_json(r);
  CHECK(j["diagnostics"].is_null());
}

TEST_CASE("stage attribution on errors") {
  AnalysisConfig c;
  c.model = PoolingModel::RandomEffectsDL;
  const std::vector<StudyRecord> one{{"x", 1, 10}};
  try {
    run_analysis(one, c);
    FAIL("expected an error");
  } catch (const AnalysisError& e) {
    CHECK(e.stage() == "pooling");
  }
  CHECK_THROWS_AS(run_analysis({}, AnalysisConfig{}), AnalysisError);
  AnalysisConfig bad;
  bad.level = 1.0;
  CHECK_THROWS_AS(run_analysis(kReversedPair, bad), AnalysisError);
}

TEST_CASE("report JSON layout") {
  const auto j = report_to_json(run_analysis(kReversedPair, AnalysisConfig{}));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"schema", "config", "studies", "pooled",
                                         "back_transformed", "diagnostics"});
  CHECK(j["schema"] == "prop-meta/1");
  CHECK(j["config"]["transform"] == "double");
  CHECK(j["config"]["model"] == "fixed");
  CHECK(j["config"]["n_convention"] == "invvar");
  CHECK(j["studies"].size() == 2);
  CHECK(j["back_transformed"]["implied_n"].get<double>() == 17233.5);
}

TEST_CASE("determinism and re-runnability") {
  AnalysisConfig c;
  c.model = PoolingModel::RandomEffectsDL;
  c.convention = HarmonicMean{};
  const auto first = render(run_analysis(kFour, c));
  const auto second = render(run_analysis(kFour, c));
  CHECK(first == second);
  CHECK(render(run_analysis(kFour, c), OutputFormat::Csv) ==
        render(run_analysis(kFour, c), OutputFormat::Csv));

  const auto parsed = nlohmann::ordered_json::parse(first);
  const auto config = config_from_json(parsed["config"]);
  const auto studies = studies_from_report(parsed);
  CHECK(render(run_analysis(studies, config)) == first);
}

TEST_CASE("twelve significant digits") {
  CHECK(round_sig(0.1234567890123456) == 0.123456789012);
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(17233.5) == "17233.5");
  CHECK(format_number(INFINITY) == "inf");
}

TEST_CASE("CSV report and per-study table") {
  const auto r = run_analysis(kReversedPair, AnalysisConfig{});
  const auto csv = render(r, OutputFormat::Csv);
  CHECK(csv.starts_with("section,item,field,value\n"));
  CHECK(csv.find("back_transformed,,implied_n,17233.5\n") != std::string::npos);
  CHECK(csv.find("finding,1,kind,OrderReversal\n") != std::string::npos);

  std::ostringstream rows;
  write_study_rows(rows, r.rows, TransformKind::DoubleArcsine, OutputFormat::Csv);
  CHECK(rows.str().starts_with("label,events,total,p,theta,variance\nstudy 10,32,16557,"));
}

TEST_CASE("curves") {
  std::ostringstream out;
  emit_curves(out, {676, 16557}, {0.00148, 0.00193});
  std::istringstream in(out.str());
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) rows.push_back(split_csv_line(line));
  REQUIRE(rows.size() == 1 + 4 + 2);
  CHECK(rows[0] == std::vector<std::string>{"N", "p", "theta_double", "theta_single"});
  CHECK(rows[1][0] == "676");
  CHECK(std::stod(rows[1][2]) == Approx(continuous_forward(0.00148, 676)).epsilon(1e-11));
  CHECK(std::stod(rows[4][2]) == Approx(continuous_forward(0.00193, 16557)).epsilon(1e-11));
  CHECK(rows[5][0] == "inf");
  CHECK(rows[5][2] == rows[5][3]);

  std::ostringstream zero;
  emit_curves(zero, {10}, {0.0, 1.0});
  CHECK(zero.str().find("10,0,") != std::string::npos);
  CHECK(zero.str().find("inf,0,0,0\n") != std::string::npos);
  CHECK(zero.str().find("inf,1,1.57079632679,1.57079632679\n") != std::string::npos);
}

TEST_CASE("stabilization emission") {
  std::ostringstream out;
  emit_stabilization(out, {TransformKind::SingleArcsine, TransformKind::DoubleArcsine}, {50}, {0.5});
  const auto s = out.str();
  CHECK(s.starts_with("transform,N,p,exact_variance,target,ratio\nsingle,50,0.5,"));
  CHECK(s.find("\ndouble,50,0.5,") != std::string::npos);
}
