#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>

#include "propmeta/study.hpp"
#include "propmeta/transform.hpp"

namespace propmeta {

struct HarmonicMean {};
struct InverseVariance {};
struct Explicit {
  double total = 1.0;
};

/// How the sample size used for back-transformation is chosen.
using BackTransformConvention = std::variant<HarmonicMean, InverseVariance, Explicit>;

/// Accepts "harmonic", "invvar" or "explicit=<N>".
BackTransformConvention convention_from_string(const std::string& text);
std::string to_string(const BackTransformConvention& convention);

struct Inversion {
  double p = 0.0;
  bool clamped = false;
};

/// Point estimate and interval mapped back to the proportion scale.
struct BackTransformResult {
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double implied_n = 1.0;
  bool clamped_point = false;
  bool clamped_lo = false;
  bool clamped_hi = false;
};

/// Sample size for back-transformation.
///
/// HarmonicMean: k / sum(1/N_i).
/// InverseVariance: the N whose approximate variance equals `pooled_variance`,
///   (1/v - 2)/4 for the double arcsine and 1/(4v) for the single arcsine,
///   floored at 1. Fractional values are returned as-is.
/// Explicit: the given N.
double implied_sample_size(std::span<const StudyRecord> studies,
                           const BackTransformConvention& convention,
                           std::optional<double> pooled_variance,
                           TransformKind kind = TransformKind::DoubleArcsine);

/// Numeric inverse of continuous_forward() by bisection. Values below the
/// attainable range map to (0, clamped), values above to (1, clamped).
Inversion invert_double_arcsine(double theta, double total);

/// sin^2(theta); theta must lie in [0, pi/2].
double invert_single_arcsine(double theta);

/// Miller's closed-form inverse of the double arcsine, expressed for the
/// 1/2-scaled transform (phi = 2*theta).
double miller_closed_form(double theta, double total);

/// Outcome of running the closed form next to bisection.
struct CrossCheck {
  double p = 0.0;           ///< value to use (bisection if validation failed)
  double closed_form = 0.0;
  double bisection = 0.0;
  bool validated = false;   ///< |closed_form - bisection| <= 1e-6
};

CrossCheck cross_checked_inverse(double theta, double total);

/// Inverse for either transform with the clamping policy applied.
Inversion invert(TransformKind kind, double theta, double total);

/// Maps a pooled estimate and its interval back, clamping each endpoint independently.
BackTransformResult back_transform(TransformKind kind, double theta_hat, double ci_lo,
                                   double ci_hi, double implied_n);

}  // namespace propmeta
