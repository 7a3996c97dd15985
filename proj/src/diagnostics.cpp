#include "propmeta/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace propmeta {

namespace {

constexpr double kThetaTieTolerance = 1e-12;

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Sign of a_i/N_i - a_j/N_j, compared as a_i*N_j vs a_j*N_i.
int compare_proportions(const StudyRecord& i, const StudyRecord& j) {
  using wide = __int128;
  const wide lhs = static_cast<wide>(i.events) * j.total;
  const wide rhs = static_cast<wide>(j.events) * i.total;
  return (lhs > rhs) - (lhs < rhs);
}

}  // namespace

std::string_view to_string(FindingKind kind) {
  switch (kind) {
    case FindingKind::OrderReversal: return "OrderReversal";
    case FindingKind::NoPreimage: return "NoPreimage";
    case FindingKind::PooledOutsideObservedRange: return "PooledOutsideObservedRange";
    case FindingKind::PartialImageOverlap: return "PartialImageOverlap";
  }
  return "?";
}

std::string_view to_string(Severity severity) {
  return severity == Severity::Error ? "Error" : "Warning";
}

bool DiagnosticsReport::has_errors() const {
  return std::any_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.severity == Severity::Error; });
}

DatasetSummary summarize(std::span<const StudyRecord> studies) {
  DatasetSummary s;
  s.study_count = studies.size();
  if (studies.empty()) return s;
  s.min_total = std::numeric_limits<std::int64_t>::max();
  for (const auto& st : studies) {
    s.total_events += st.events;
    s.min_total = std::min(s.min_total, st.total);
    s.max_total = std::max(s.max_total, st.total);
  }
  return s;
}

std::vector<Finding> detect_order_reversals(std::span<const StudyRecord> studies,
                                            TransformKind kind, const DiagnosticsPolicy& policy) {
  if (studies.size() < 2) throw DomainError("order-reversal scan needs at least 2 studies");
  std::vector<Finding> out;
  if (kind == TransformKind::SingleArcsine) return out;

  std::vector<double> theta;
  theta.reserve(studies.size());
  for (const auto& s : studies) theta.push_back(forward(kind, s.events, s.total));

  for (std::size_t i = 0; i < studies.size(); ++i) {
    for (std::size_t j = i + 1; j < studies.size(); ++j) {
      const int p_order = compare_proportions(studies[i], studies[j]);
      const double dtheta = theta[i] - theta[j];
      const int t_order = (dtheta > 0.0) - (dtheta < 0.0);
      const auto& a = studies[i];
      const auto& b = studies[j];
      if (p_order != 0 && t_order != 0 && p_order != t_order) {
        const auto& hi_p = p_order > 0 ? a : b;
        const auto& lo_p = p_order > 0 ? b : a;
        const double th_hi_p = p_order > 0 ? theta[i] : theta[j];
        const double th_lo_p = p_order > 0 ? theta[j] : theta[i];
        out.push_back({FindingKind::OrderReversal, policy.other, {a.label, b.label},
                       fmt("'%s' has the larger proportion (%lld/%lld = %.6g vs %lld/%lld = %.6g) "
                           "but the smaller theta (%.6g vs %.6g)",
                           hi_p.label.c_str(), static_cast<long long>(hi_p.events),
                           static_cast<long long>(hi_p.total), hi_p.proportion(),
                           static_cast<long long>(lo_p.events), static_cast<long long>(lo_p.total),
                           lo_p.proportion(), th_hi_p, th_lo_p)});
      } else if (p_order == 0 && std::abs(dtheta) > kThetaTieTolerance) {
        out.push_back({FindingKind::OrderReversal, policy.other, {a.label, b.label},
                       fmt("equal proportions, unequal theta: p = %.6g for both, theta %.6g "
                           "(N = %lld) vs %.6g (N = %lld)",
                           a.proportion(), theta[i], static_cast<long long>(a.total), theta[j],
                           static_cast<long long>(b.total))});
      }
    }
  }
  for (auto& f : out) std::sort(f.studies.begin(), f.studies.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const Finding& x, const Finding& y) { return x.studies < y.studies; });
  return out;
}

std::optional<Finding> check_preimage(double theta, double total, TransformKind kind,
                                      Severity severity, std::string_view what) {
  const ThetaRange range = theta_range(kind, total);
  if (range.contains(theta)) return std::nullopt;
  Finding f;
  f.kind = FindingKind::NoPreimage;
  f.severity = severity;
  f.detail = fmt("%.*s = %.6g lies %s the attainable range [%.6g, %.6g] for N = %.6g; "
                 "no proportion maps to it (clamped to p = %d)",
                 static_cast<int>(what.size()), what.data(), theta,
                 theta < range.lo ? "below" : "above", range.lo, range.hi, total,
                 theta < range.lo ? 0 : 1);
  return f;
}

std::optional<Finding> check_pooled_between(double p_hat, std::span<const StudyRecord> studies,
                                            const DiagnosticsPolicy& policy) {
  if (studies.empty()) throw DomainError("pooled-range check needs at least one study");
  const StudyRecord* lo = &studies.front();
  const StudyRecord* hi = &studies.front();
  for (const auto& s : studies) {
    if (compare_proportions(s, *lo) < 0) lo = &s;
    if (compare_proportions(s, *hi) > 0) hi = &s;
  }
  const double p_min = lo->proportion();
  const double p_max = hi->proportion();
  if (p_hat >= p_min && p_hat <= p_max) return std::nullopt;

  Finding f;
  f.kind = FindingKind::PooledOutsideObservedRange;
  f.severity = policy.other;
  f.studies = {lo->label};
  if (hi->label != lo->label) f.studies.push_back(hi->label);
  std::sort(f.studies.begin(), f.studies.end());
  f.detail = fmt("back-transformed pooled proportion %.6g is %s every observed proportion "
                 "(observed range [%.6g, %.6g])",
                 p_hat, p_hat > p_max ? "above" : "below", p_min, p_max);
  return f;
}

std::optional<Finding> overlap_report(std::span<const StudyRecord> studies, TransformKind kind,
                                      const DiagnosticsPolicy& policy) {
  if (studies.size() < 2) throw DomainError("overlap report needs at least 2 studies");
  if (kind == TransformKind::SingleArcsine) return std::nullopt;

  std::vector<ThetaRange> ranges;
  ranges.reserve(studies.size());
  ThetaRange common{0.0, std::numeric_limits<double>::infinity()};
  for (const auto& s : studies) {
    validate(s);
    ranges.push_back(theta_range(kind, static_cast<double>(s.total)));
    common.lo = std::max(common.lo, ranges.back().lo);
    common.hi = std::min(common.hi, ranges.back().hi);
  }
  // Ranges are nested in N, so the intersection is the smallest study's range;
  // report whenever some study's range extends beyond it.
  const bool partial = std::any_of(ranges.begin(), ranges.end(), [&](const ThetaRange& r) {
    return common.lo > r.lo || common.hi < r.hi;
  });
  if (!partial) return std::nullopt;

  Finding f;
  f.kind = FindingKind::PartialImageOverlap;
  f.severity = policy.other;
  std::string detail = fmt("attainable theta ranges only partly overlap; common range [%.6g, %.6g]",
                           common.lo, common.hi);
  for (std::size_t i = 0; i < studies.size(); ++i) {
    f.studies.push_back(studies[i].label);
    detail += fmt("; %s (N = %lld): [%.6g, %.6g]", studies[i].label.c_str(),
                  static_cast<long long>(studies[i].total), ranges[i].lo, ranges[i].hi);
  }
  f.detail = std::move(detail);
  return f;
}

}  // namespace propmeta
