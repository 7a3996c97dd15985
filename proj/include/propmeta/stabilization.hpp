#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "propmeta/transform.hpp"

namespace propmeta {

struct VariancePoint {
  double p = 0.0;
  std::int64_t total = 1;
  double exact_variance = 0.0;
  double target = 0.0;
  double ratio = 0.0;
};

/// Var[T(A, N)] for A ~ Binomial(N, p), by full enumeration of a = 0..N.
double exact_variance(TransformKind kind, std::int64_t total, double p);

/// One point per grid value, in grid order. `threads` = 0 picks the hardware
/// concurrency; output does not depend on it.
std::vector<VariancePoint> variance_curve(TransformKind kind, std::int64_t total,
                                          std::span<const double> p_grid,
                                          unsigned threads = 0);

/// max(ratio) - min(ratio) over a curve; 0 for an empty curve.
double ratio_spread(std::span<const VariancePoint> curve);

std::vector<double> default_p_grid();
std::vector<std::int64_t> default_totals();

namespace detail {
/// Binomial pmf for a = 0..N, computed in log space via lgamma.
std::vector<double> binomial_pmf(std::int64_t total, double p);
/// T(a, N) for a = 0..N.
std::vector<double> transform_table(TransformKind kind, std::int64_t total);
/// Variance from precomputed pmf and transform table.
double variance_from_tables(std::span<const double> pmf, std::span<const double> values);
}  // namespace detail

}  // namespace propmeta
