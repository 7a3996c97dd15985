#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "propmeta/transform.hpp"

namespace propmeta {

enum class PoolingModel { FixedEffect, RandomEffectsDL };

std::string_view to_string(PoolingModel model);
PoolingModel pooling_model_from_string(std::string_view name);

/// Pooled estimate on the transformed scale.
struct PooledResult {
  double theta_hat = 0.0;
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::vector<double> weights;
  PoolingModel model = PoolingModel::FixedEffect;
  double tau2 = 0.0;
  /// Cochran's Q against the fixed-effect estimate; 0 for a single study.
  double q = 0.0;
  double level = 0.95;

  double variance() const { return se * se; }
};

/// Inverse-variance weighted mean with a normal-approximation interval.
PooledResult pool_fixed(std::span<const TransformedStudy> studies, double level = 0.95);

/// DerSimonian-Laird moment estimate of tau^2 followed by re-weighting with 1/(v_i + tau^2).
PooledResult pool_random_dl(std::span<const TransformedStudy> studies, double level = 0.95);

PooledResult pool(std::span<const TransformedStudy> studies, PoolingModel model, double level);

}  // namespace propmeta
