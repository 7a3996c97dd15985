#include "propmeta/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "propmeta/csv.hpp"
#include "propmeta/stabilization.hpp"

namespace propmeta {

using json = nlohmann::ordered_json;

AnalysisError::AnalysisError(std::string stage, const std::string& message)
    : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}

void validate(const AnalysisConfig& config) {
  if (!(config.level > 0.0 && config.level < 1.0)) {
    throw DomainError("confidence level must lie in (0,1)");
  }
  if (const auto* e = std::get_if<Explicit>(&config.convention); e && !(e->total > 0.0)) {
    throw DomainError("explicit sample size must be positive");
  }
}

std::vector<StudyRow> make_rows(const std::vector<StudyRecord>& studies, TransformKind kind) {
  std::vector<StudyRow> rows;
  rows.reserve(studies.size());
  for (const auto& s : studies) {
    const TransformedStudy t = transform_study(s, kind);
    rows.push_back({s, s.proportion(), t.theta, t.variance});
  }
  return rows;
}

namespace {

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const AnalysisError&) {
    throw;
  } catch (const std::exception& e) {
    throw AnalysisError(name, e.what());
  }
}

}  // namespace

AnalysisReport run_analysis(const std::vector<StudyRecord>& studies, const AnalysisConfig& config) {
  AnalysisReport report;
  report.config = config;
  stage("config", [&] {
    validate(config);
    if (studies.empty()) throw DomainError("no studies to analyse");
    return 0;
  });

  const TransformKind kind = config.transform;
  report.rows = stage("transform", [&] { return make_rows(studies, kind); });
  const auto transformed = stage("transform", [&] { return transform_studies(studies, kind); });
  report.pooled = stage("pooling", [&] { return pool(transformed, config.model, config.level); });

  report.back = stage("back_transform", [&] {
    const double n = implied_sample_size(studies, config.convention, report.pooled.variance(), kind);
    return back_transform(kind, report.pooled.theta_hat, report.pooled.ci_lo, report.pooled.ci_hi, n);
  });

  report.diagnostics.transform = kind;
  report.diagnostics.dataset_summary = summarize(studies);
  if (!config.diagnostics_enabled) return report;

  stage("diagnostics", [&] {
    auto& findings = report.diagnostics.findings;
    const auto& policy = config.policy;
    if (studies.size() >= 2) {
      auto reversals = detect_order_reversals(studies, kind, policy);
      findings.insert(findings.end(), reversals.begin(), reversals.end());
      if (auto f = overlap_report(studies, kind, policy)) findings.push_back(std::move(*f));
    }
    const double n = report.back.implied_n;
    if (auto f = check_preimage(report.pooled.theta_hat, n, kind, policy.pooled_no_preimage,
                                "pooled theta")) {
      findings.push_back(std::move(*f));
    }
    if (auto f = check_preimage(report.pooled.ci_lo, n, kind, policy.other, "lower CI theta")) {
      findings.push_back(std::move(*f));
    }
    if (auto f = check_preimage(report.pooled.ci_hi, n, kind, policy.other, "upper CI theta")) {
      findings.push_back(std::move(*f));
    }
    if (auto f = check_pooled_between(report.back.p_hat, studies, policy)) {
      findings.push_back(std::move(*f));
    }
    return 0;
  });
  return report;
}

int exit_code(const AnalysisReport& report) { return report.diagnostics.has_errors() ? 2 : 0; }

double round_sig(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

namespace {

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_sig(v);
}

Severity severity_from_string(const std::string& s) {
  if (s == "Error") return Severity::Error;
  if (s == "Warning") return Severity::Warning;
  throw DomainError("unknown severity '" + s + "'");
}

}  // namespace

json config_to_json(const AnalysisConfig& config) {
  json j;
  j["transform"] = to_string(config.transform);
  j["model"] = to_string(config.model);
  j["n_convention"] = to_string(config.convention);
  j["level"] = num(config.level);
  j["diagnostics"] = config.diagnostics_enabled;
  j["format"] = config.output_format == OutputFormat::Json ? "json" : "csv";
  j["severity"] = {{"pooled_no_preimage", to_string(config.policy.pooled_no_preimage)},
                   {"other", to_string(config.policy.other)}};
  return j;
}

AnalysisConfig config_from_json(const json& j) {
  AnalysisConfig c;
  c.transform = transform_kind_from_string(j.at("transform").get<std::string>());
  c.model = pooling_model_from_string(j.at("model").get<std::string>());
  c.convention = convention_from_string(j.at("n_convention").get<std::string>());
  c.level = j.at("level").get<double>();
  c.diagnostics_enabled = j.at("diagnostics").get<bool>();
  c.output_format = j.value("format", std::string("json")) == "csv" ? OutputFormat::Csv
                                                                      : OutputFormat::Json;
  if (j.contains("severity")) {
    const auto& s = j.at("severity");
    c.policy.pooled_no_preimage = severity_from_string(s.at("pooled_no_preimage").get<std::string>());
    c.policy.other = severity_from_string(s.at("other").get<std::string>());
  }
  validate(c);
  return c;
}

json study_rows_to_json(const std::vector<StudyRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j;
    j["label"] = r.study.label;
    j["events"] = r.study.events;
    j["total"] = r.study.total;
    j["p"] = num(r.p);
    j["theta"] = num(r.theta);
    j["variance"] = num(r.variance);
    arr.push_back(std::move(j));
  }
  return arr;
}

json diagnostics_to_json(const DiagnosticsReport& report) {
  json j;
  j["transform"] = to_string(report.transform);
  const auto& s = report.dataset_summary;
  j["summary"] = {{"studies", s.study_count},
                  {"total_events", s.total_events},
                  {"min_total", s.min_total},
                  {"max_total", s.max_total}};
  json findings = json::array();
  for (const auto& f : report.findings) {
    findings.push_back({{"kind", to_string(f.kind)},
                        {"severity", to_string(f.severity)},
                        {"studies", f.studies},
                        {"detail", f.detail}});
  }
  j["findings"] = std::move(findings);
  return j;
}

json report_to_json(const AnalysisReport& report) {
  json j;
  j["schema"] = kSchema;
  j["config"] = config_to_json(report.config);
  j["studies"] = study_rows_to_json(report.rows);

  const auto& p = report.pooled;
  json pooled;
  pooled["model"] = to_string(p.model);
  pooled["theta"] = num(p.theta_hat);
  pooled["se"] = num(p.se);
  pooled["ci_lo"] = num(p.ci_lo);
  pooled["ci_hi"] = num(p.ci_hi);
  pooled["level"] = num(p.level);
  pooled["tau2"] = num(p.tau2);
  pooled["q"] = num(p.q);
  json weights = json::array();
  for (double w : p.weights) weights.push_back(num(w));
  pooled["weights"] = std::move(weights);
  j["pooled"] = std::move(pooled);

  const auto& b = report.back;
  json back;
  back["implied_n"] = num(b.implied_n);
  back["p"] = num(b.p_hat);
  back["ci_lo"] = num(b.ci_lo);
  back["ci_hi"] = num(b.ci_hi);
  back["clamped_point"] = b.clamped_point;
  back["clamped_lo"] = b.clamped_lo;
  back["clamped_hi"] = b.clamped_hi;
  j["back_transformed"] = std::move(back);

  j["diagnostics"] = report.config.diagnostics_enabled ? diagnostics_to_json(report.diagnostics)
                                                       : json(nullptr);
  return j;
}

std::vector<StudyRecord> studies_from_report(const json& j) {
  std::vector<StudyRecord> out;
  for (const auto& row : j.at("studies")) {
    StudyRecord s{row.at("label").get<std::string>(), row.at("events").get<std::int64_t>(),
                  row.at("total").get<std::int64_t>()};
    validate(s);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

void csv_row(std::ostream& out, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out << ',';
    out << csv_escape(f);
    first = false;
  }
  out << '\n';
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

void write_study_rows(std::ostream& out, const std::vector<StudyRow>& rows, TransformKind kind,
                      OutputFormat format) {
  if (format == OutputFormat::Json) {
    json j;
    j["schema"] = kSchema;
    j["transform"] = to_string(kind);
    j["studies"] = study_rows_to_json(rows);
    out << j.dump(2) << '\n';
    return;
  }
  csv_row(out, {"label", "events", "total", "p", "theta", "variance"});
  for (const auto& r : rows) {
    csv_row(out, {r.study.label, std::to_string(r.study.events), std::to_string(r.study.total),
                  format_number(r.p), format_number(r.theta), format_number(r.variance)});
  }
}

void write_diagnostics(std::ostream& out, const DiagnosticsReport& report, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json j;
    j["schema"] = kSchema;
    j["diagnostics"] = diagnostics_to_json(report);
    out << j.dump(2) << '\n';
    return;
  }
  csv_row(out, {"kind", "severity", "studies", "detail"});
  for (const auto& f : report.findings) {
    csv_row(out, {std::string(to_string(f.kind)), std::string(to_string(f.severity)),
                  join(f.studies, ';'), f.detail});
  }
}

void write_report(std::ostream& out, const AnalysisReport& report, OutputFormat format) {
  if (format == OutputFormat::Json) {
    out << report_to_json(report).dump(2) << '\n';
    return;
  }
  // Long format: section,item,field,value
  csv_row(out, {"section", "item", "field", "value"});
  const json cfg = config_to_json(report.config);
  for (const auto& [key, value] : cfg.items()) {
    if (key == "severity") {
      for (const auto& [k, v] : value.items()) csv_row(out, {"config", "severity", k, v.get<std::string>()});
    } else {
      csv_row(out, {"config", "", key, value.is_string() ? value.get<std::string>() : value.dump()});
    }
  }
  for (const auto& r : report.rows) {
    csv_row(out, {"study", r.study.label, "events", std::to_string(r.study.events)});
    csv_row(out, {"study", r.study.label, "total", std::to_string(r.study.total)});
    csv_row(out, {"study", r.study.label, "p", format_number(r.p)});
    csv_row(out, {"study", r.study.label, "theta", format_number(r.theta)});
    csv_row(out, {"study", r.study.label, "variance", format_number(r.variance)});
  }
  const auto& p = report.pooled;
  csv_row(out, {"pooled", "", "model", std::string(to_string(p.model))});
  csv_row(out, {"pooled", "", "theta", format_number(p.theta_hat)});
  csv_row(out, {"pooled", "", "se", format_number(p.se)});
  csv_row(out, {"pooled", "", "ci_lo", format_number(p.ci_lo)});
  csv_row(out, {"pooled", "", "ci_hi", format_number(p.ci_hi)});
  csv_row(out, {"pooled", "", "level", format_number(p.level)});
  csv_row(out, {"pooled", "", "tau2", format_number(p.tau2)});
  csv_row(out, {"pooled", "", "q", format_number(p.q)});
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    csv_row(out, {"pooled", report.rows[i].study.label, "weight", format_number(p.weights[i])});
  }
  const auto& b = report.back;
  csv_row(out, {"back_transformed", "", "implied_n", format_number(b.implied_n)});
  csv_row(out, {"back_transformed", "", "p", format_number(b.p_hat)});
  csv_row(out, {"back_transformed", "", "ci_lo", format_number(b.ci_lo)});
  csv_row(out, {"back_transformed", "", "ci_hi", format_number(b.ci_hi)});
  csv_row(out, {"back_transformed", "", "clamped_point", yes_no(b.clamped_point)});
  csv_row(out, {"back_transformed", "", "clamped_lo", yes_no(b.clamped_lo)});
  csv_row(out, {"back_transformed", "", "clamped_hi", yes_no(b.clamped_hi)});
  if (!report.config.diagnostics_enabled) return;
  for (std::size_t i = 0; i < report.diagnostics.findings.size(); ++i) {
    const auto& f = report.diagnostics.findings[i];
    const std::string item = std::to_string(i + 1);
    csv_row(out, {"finding", item, "kind", std::string(to_string(f.kind))});
    csv_row(out, {"finding", item, "severity", std::string(to_string(f.severity))});
    csv_row(out, {"finding", item, "studies", join(f.studies, ';')});
    csv_row(out, {"finding", item, "detail", f.detail});
  }
}

void emit_curves(std::ostream& out, const std::vector<double>& totals,
                 const std::vector<double>& p_grid) {
  if (totals.empty() || p_grid.empty()) throw DomainError("curves need at least one N and one p");
  out << "N,p,theta_double,theta_single\n";
  for (double n : totals) {
    for (double p : p_grid) {
      out << format_number(n) << ',' << format_number(p) << ','
          << format_number(continuous_forward(p, n)) << ','
          << format_number(detail::asin_sqrt(p)) << '\n';
    }
  }
  for (double p : p_grid) {
    const std::string single = format_number(detail::asin_sqrt(p));
    out << "inf," << format_number(p) << ',' << single << ',' << single << '\n';
  }
}

void emit_stabilization(std::ostream& out, const std::vector<TransformKind>& kinds,
                        const std::vector<std::int64_t>& totals, const std::vector<double>& p_grid) {
  out << "transform,N,p,exact_variance,target,ratio\n";
  for (TransformKind kind : kinds) {
    for (std::int64_t n : totals) {
      for (const auto& pt : variance_curve(kind, n, p_grid)) {
        out << to_string(kind) << ',' << n << ',' << format_number(pt.p) << ','
            << format_number(pt.exact_variance) << ',' << format_number(pt.target) << ','
            << format_number(pt.ratio) << '\n';
      }
    }
  }
}

}  // namespace propmeta
