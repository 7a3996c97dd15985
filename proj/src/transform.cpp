#include "propmeta/transform.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace propmeta {

namespace {

constexpr double kClampSlack = 1e-12;

void check_counts(std::int64_t events, std::int64_t total) {
  if (total < 1) throw DomainError("sample size must be at least 1");
  if (events < 0) throw DomainError("event count must be non-negative");
  if (events > total) throw DomainError("event count exceeds sample size");
}

}  // namespace

namespace detail {

double asin_sqrt(double x) {
  if (!(x >= -kClampSlack && x <= 1.0 + kClampSlack)) {
    throw DomainError("asin(sqrt(x)) argument out of [0,1]: " + std::to_string(x));
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return std::numbers::pi / 2;
  return std::asin(std::sqrt(x));
}

}  // namespace detail

double double_arcsine(std::int64_t events, std::int64_t total) {
  check_counts(events, total);
  const double n1 = static_cast<double>(total) + 1.0;
  const double a = static_cast<double>(events);
  return 0.5 * (detail::asin_sqrt(a / n1) + detail::asin_sqrt((a + 1.0) / n1));
}

double single_arcsine(std::int64_t events, std::int64_t total) {
  check_counts(events, total);
  return detail::asin_sqrt(static_cast<double>(events) / static_cast<double>(total));
}

double continuous_forward(double p, double total) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("proportion must lie in [0,1]");
  if (!(total > 0.0) || !std::isfinite(total)) throw DomainError("sample size must be positive");
  const double a = p * total;
  const double n1 = total + 1.0;
  return 0.5 * (detail::asin_sqrt(a / n1) + detail::asin_sqrt((a + 1.0) / n1));
}

double approx_variance(TransformKind kind, double total) {
  if (!(total > 0.0)) throw DomainError("sample size must be positive");
  return kind == TransformKind::DoubleArcsine ? 1.0 / (4.0 * total + 2.0) : 1.0 / (4.0 * total);
}

ThetaRange theta_range(TransformKind kind, double total) {
  if (!(total > 0.0)) throw DomainError("sample size must be positive");
  if (kind == TransformKind::SingleArcsine) return {0.0, std::numbers::pi / 2};
  return {continuous_forward(0.0, total), continuous_forward(1.0, total)};
}

double forward(TransformKind kind, std::int64_t events, std::int64_t total) {
  return kind == TransformKind::DoubleArcsine ? double_arcsine(events, total)
                                              : single_arcsine(events, total);
}

TransformedStudy transform_study(const StudyRecord& study, TransformKind kind) {
  validate(study);
  return {study.label, forward(kind, study.events, study.total),
          approx_variance(kind, static_cast<double>(study.total)),
          static_cast<double>(study.total), kind};
}

std::vector<TransformedStudy> transform_studies(const std::vector<StudyRecord>& studies,
                                                TransformKind kind) {
  std::vector<TransformedStudy> out;
  out.reserve(studies.size());
  for (const auto& s : studies) out.push_back(transform_study(s, kind));
  return out;
}

}  // namespace propmeta
