#include "propmeta/back_transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace propmeta {

namespace {

constexpr double kBisectionWidth = 1e-12;
constexpr int kBisectionMaxIter = 200;
constexpr double kClosedFormTolerance = 1e-6;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

BackTransformConvention convention_from_string(const std::string& text) {
  if (text == "harmonic") return HarmonicMean{};
  if (text == "invvar") return InverseVariance{};
  constexpr std::string_view prefix = "explicit=";
  if (text.starts_with(prefix)) {
    const std::string number = text.substr(prefix.size());
    std::size_t used = 0;
    double n = 0.0;
    try {
      n = std::stod(number, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != number.size()) {
      throw DomainError("explicit sample size is not a number: '" + number + "'");
    }
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("explicit sample size must be positive");
    return Explicit{n};
  }
  throw DomainError("unknown N convention '" + text + "' (expected harmonic, invvar or explicit=<N>)");
}

std::string to_string(const BackTransformConvention& convention) {
  return std::visit(overloaded{[](HarmonicMean) { return std::string("harmonic"); },
                               [](InverseVariance) { return std::string("invvar"); },
                               [](Explicit e) {
                                 char buf[64];
                                 std::snprintf(buf, sizeof buf, "explicit=%.12g", e.total);
                                 return std::string(buf);
                               }},
                    convention);
}

double implied_sample_size(std::span<const StudyRecord> studies,
                           const BackTransformConvention& convention,
                           std::optional<double> pooled_variance, TransformKind kind) {
  if (studies.empty()) throw DomainError("implied sample size needs at least one study");
  return std::visit(
      overloaded{
          [&](HarmonicMean) {
            double inv_sum = 0.0;
            for (const auto& s : studies) {
              validate(s);
              inv_sum += 1.0 / static_cast<double>(s.total);
            }
            return static_cast<double>(studies.size()) / inv_sum;
          },
          [&](InverseVariance) {
            if (!pooled_variance) {
              throw DomainError("inverse-variance convention requires the pooled variance");
            }
            const double v = *pooled_variance;
            if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("pooled variance must be positive");
            const double n = kind == TransformKind::DoubleArcsine ? (1.0 / v - 2.0) / 4.0
                                                                  : 1.0 / (4.0 * v);
            return std::max(1.0, n);
          },
          [](Explicit e) {
            if (!(e.total > 0.0)) throw DomainError("explicit sample size must be positive");
            return e.total;
          }},
      convention);
}

Inversion invert_double_arcsine(double theta, double total) {
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  const ThetaRange range = theta_range(TransformKind::DoubleArcsine, total);
  if (theta < range.lo) return {0.0, true};
  if (theta > range.hi) return {1.0, true};
  if (theta == range.lo) return {0.0, false};
  if (theta == range.hi) return {1.0, false};

  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < kBisectionMaxIter && hi - lo > kBisectionWidth; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (continuous_forward(mid, total) < theta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), false};
}

double invert_single_arcsine(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
    throw DomainError("theta outside [0, pi/2] has no single-arcsine preimage");
  }
  const double s = std::sin(theta);
  return std::clamp(s * s, 0.0, 1.0);
}

double miller_closed_form(double theta, double total) {
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  if (!theta_range(TransformKind::DoubleArcsine, total).contains(theta)) {
    throw DomainError("theta outside the attainable double-arcsine range");
  }
  const double phi = 2.0 * theta;
  const double s = std::sin(phi);
  if (s == 0.0) throw DomainError("closed-form inverse undefined where sin(2*theta) = 0");
  const double c = std::cos(phi);
  const double sign = c > 0.0 ? 1.0 : (c < 0.0 ? -1.0 : 0.0);
  const double inner = s + (s - 1.0 / s) / total;
  const double root = std::sqrt(std::max(0.0, 1.0 - inner * inner));
  return std::clamp(0.5 * (1.0 - sign * root), 0.0, 1.0);
}

CrossCheck cross_checked_inverse(double theta, double total) {
  CrossCheck out;
  out.bisection = invert_double_arcsine(theta, total).p;
  try {
    out.closed_form = miller_closed_form(theta, total);
    out.validated = std::abs(out.closed_form - out.bisection) <= kClosedFormTolerance;
  } catch (const DomainError&) {
    out.closed_form = std::nan("");
    out.validated = false;
  }
  out.p = out.validated ? out.closed_form : out.bisection;
  return out;
}

Inversion invert(TransformKind kind, double theta, double total) {
  if (kind == TransformKind::DoubleArcsine) return invert_double_arcsine(theta, total);
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  if (theta < 0.0) return {0.0, true};
  if (theta > std::numbers::pi / 2) return {1.0, true};
  return {invert_single_arcsine(theta), false};
}

BackTransformResult back_transform(TransformKind kind, double theta_hat, double ci_lo,
                                   double ci_hi, double implied_n) {
  const Inversion point = invert(kind, theta_hat, implied_n);
  const Inversion lo = invert(kind, ci_lo, implied_n);
  const Inversion hi = invert(kind, ci_hi, implied_n);
  BackTransformResult r;
  r.implied_n = implied_n;
  r.p_hat = point.p;
  r.ci_lo = std::min(lo.p, r.p_hat);
  r.ci_hi = std::max(hi.p, r.p_hat);
  r.clamped_point = point.clamped;
  r.clamped_lo = lo.clamped;
  r.clamped_hi = hi.clamped;
  return r;
}

}  // namespace propmeta
