#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "propmeta/study.hpp"

namespace propmeta {

/// Attainable values of a transform at a fixed sample size, inclusive on both ends.
struct ThetaRange {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double theta) const { return theta >= lo && theta <= hi; }
};

/// A study mapped onto a transformed scale together with its approximate variance.
struct TransformedStudy {
  std::string label;
  double theta = 0.0;
  double variance = 0.0;
  double source_total = 1.0;
  TransformKind kind = TransformKind::DoubleArcsine;
};

// Freeman-Tukey double arcsine with the 1/2 scaling:
//   (asin(sqrt(a/(N+1))) + asin(sqrt((a+1)/(N+1)))) / 2
double double_arcsine(std::int64_t events, std::int64_t total);

// asin(sqrt(a/N)); a function of a/N only.
double single_arcsine(std::int64_t events, std::int64_t total);

/// Double arcsine with `events` replaced by p*N, for real p in [0,1] and real N > 0.
/// Strictly increasing in p; equals double_arcsine() on lattice points p = a/N.
double continuous_forward(double p, double total);

/// 1/(4N+2) for the double arcsine, 1/(4N) for the single arcsine.
double approx_variance(TransformKind kind, double total);

ThetaRange theta_range(TransformKind kind, double total);

double forward(TransformKind kind, std::int64_t events, std::int64_t total);

TransformedStudy transform_study(const StudyRecord& study, TransformKind kind);
std::vector<TransformedStudy> transform_studies(const std::vector<StudyRecord>& studies,
                                                TransformKind kind);

namespace detail {
// asin(sqrt(x)) with x clamped to [0,1]; rejects excursions beyond 1e-12.
double asin_sqrt(double x);
}  // namespace detail

}  // namespace propmeta
