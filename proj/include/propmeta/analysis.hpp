#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "propmeta/back_transform.hpp"
#include "propmeta/diagnostics.hpp"
#include "propmeta/pooling.hpp"
#include "propmeta/study.hpp"
#include "propmeta/transform.hpp"

namespace propmeta {

inline constexpr const char* kSchema = "prop-meta/1";

enum class OutputFormat { Json, Csv };

struct AnalysisConfig {
  TransformKind transform = TransformKind::DoubleArcsine;
  PoolingModel model = PoolingModel::FixedEffect;
  BackTransformConvention convention = InverseVariance{};
  double level = 0.95;
  bool diagnostics_enabled = true;
  OutputFormat output_format = OutputFormat::Json;
  DiagnosticsPolicy policy;
};

/// Throws DomainError if the level is not in (0,1) or an explicit N is not positive.
void validate(const AnalysisConfig& config);

struct StudyRow {
  StudyRecord study;
  double p = 0.0;
  double theta = 0.0;
  double variance = 0.0;
};

struct AnalysisReport {
  AnalysisConfig config;
  std::vector<StudyRow> rows;
  PooledResult pooled;
  BackTransformResult back;
  DiagnosticsReport diagnostics;
};

/// Failure inside one stage of run_analysis; what() is prefixed with the stage.
class AnalysisError : public std::runtime_error {
public:
  AnalysisError(std::string stage, const std::string& message);
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

/// transform -> pool -> implied N -> back-transform -> diagnostics.
AnalysisReport run_analysis(const std::vector<StudyRecord>& studies, const AnalysisConfig& config);

/// Exit status for a completed run: 2 with Error-severity findings, else 0.
int exit_code(const AnalysisReport& report);

// Serialization. All reals are rounded to 12 significant digits.
double round_sig(double value, int digits = 12);
std::string format_number(double value);

nlohmann::ordered_json config_to_json(const AnalysisConfig& config);
AnalysisConfig config_from_json(const nlohmann::ordered_json& json);
nlohmann::ordered_json report_to_json(const AnalysisReport& report);
nlohmann::ordered_json diagnostics_to_json(const DiagnosticsReport& report);
nlohmann::ordered_json study_rows_to_json(const std::vector<StudyRow>& rows);

/// Studies embedded in a JSON report (its "studies" array).
std::vector<StudyRecord> studies_from_report(const nlohmann::ordered_json& json);

std::vector<StudyRow> make_rows(const std::vector<StudyRecord>& studies, TransformKind kind);

void write_report(std::ostream& out, const AnalysisReport& report, OutputFormat format);
void write_study_rows(std::ostream& out, const std::vector<StudyRow>& rows, TransformKind kind,
                      OutputFormat format);
void write_diagnostics(std::ostream& out, const DiagnosticsReport& report, OutputFormat format);

/// Transform curves for plotting: columns N,p,theta_double,theta_single, one
/// row per (N, p), followed by rows with N=inf where theta_double repeats
/// theta_single (the large-N limit).
void emit_curves(std::ostream& out, const std::vector<double>& totals,
                 const std::vector<double>& p_grid);

/// Stabilization curves: columns transform,N,p,exact_variance,target,ratio.
void emit_stabilization(std::ostream& out, const std::vector<TransformKind>& kinds,
                        const std::vector<std::int64_t>& totals, const std::vector<double>& p_grid);

}  // namespace propmeta
