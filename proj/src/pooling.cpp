#include "propmeta/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "propmeta/normal_quantile.hpp"

namespace propmeta {

std::string_view to_string(PoolingModel model) {
  return model == PoolingModel::FixedEffect ? "fixed" : "dl";
}

PoolingModel pooling_model_from_string(std::string_view name) {
  if (name == "fixed") return PoolingModel::FixedEffect;
  if (name == "dl") return PoolingModel::RandomEffectsDL;
  throw DomainError("unknown pooling model '" + std::string(name) + "' (expected fixed or dl)");
}

namespace {

void check_inputs(std::span<const TransformedStudy> studies) {
  if (studies.empty()) throw DomainError("cannot pool an empty study list");
  const TransformKind kind = studies.front().kind;
  for (const auto& s : studies) {
    if (s.kind != kind) throw DomainError("cannot pool studies on different transformed scales");
    if (!(s.variance > 0.0) || !std::isfinite(s.variance)) {
      throw DomainError("study '" + s.label + "' has non-positive variance");
    }
    if (!std::isfinite(s.theta)) throw DomainError("study '" + s.label + "' has non-finite theta");
  }
}

// Weighted mean with weights 1/(v_i + tau2).
PooledResult weighted(std::span<const TransformedStudy> studies, double tau2, double level) {
  PooledResult r;
  r.level = level;
  r.tau2 = tau2;
  r.weights.reserve(studies.size());
  double sum_w = 0.0;
  double sum_wt = 0.0;
  for (const auto& s : studies) {
    const double w = 1.0 / (s.variance + tau2);
    r.weights.push_back(w);
    sum_w += w;
    sum_wt += w * s.theta;
  }
  r.theta_hat = sum_wt / sum_w;
  // Rounding can push a weighted mean of near-identical values a hair outside
  // the hull; keep it convex.
  double lo = studies.front().theta;
  double hi = lo;
  for (const auto& s : studies) {
    lo = std::min(lo, s.theta);
    hi = std::max(hi, s.theta);
  }
  r.theta_hat = std::clamp(r.theta_hat, lo, hi);
  r.se = std::sqrt(1.0 / sum_w);
  const double z = z_for_level(level);
  r.ci_lo = r.theta_hat - z * r.se;
  r.ci_hi = r.theta_hat + z * r.se;
  return r;
}

double cochran_q(std::span<const TransformedStudy> studies, const PooledResult& fixed) {
  double q = 0.0;
  for (std::size_t i = 0; i < studies.size(); ++i) {
    const double d = studies[i].theta - fixed.theta_hat;
    q += fixed.weights[i] * d * d;
  }
  return q;
}

}  // namespace

PooledResult pool_fixed(std::span<const TransformedStudy> studies, double level) {
  check_inputs(studies);
  z_for_level(level);
  PooledResult r = weighted(studies, 0.0, level);
  r.model = PoolingModel::FixedEffect;
  r.q = cochran_q(studies, r);
  return r;
}

PooledResult pool_random_dl(std::span<const TransformedStudy> studies, double level) {
  check_inputs(studies);
  if (studies.size() < 2) throw DomainError("DerSimonian-Laird pooling needs at least 2 studies");
  const PooledResult fixed = pool_fixed(studies, level);
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  for (double w : fixed.weights) {
    sum_w += w;
    sum_w2 += w * w;
  }
  const double k = static_cast<double>(studies.size());
  const double denom = sum_w - sum_w2 / sum_w;
  const double tau2 = denom > 0.0 ? std::max(0.0, (fixed.q - (k - 1.0)) / denom) : 0.0;
  PooledResult r = weighted(studies, tau2, level);
  r.model = PoolingModel::RandomEffectsDL;
  r.q = fixed.q;
  return r;
}

PooledResult pool(std::span<const TransformedStudy> studies, PoolingModel model, double level) {
  return model == PoolingModel::FixedEffect ? pool_fixed(studies, level)
                                            : pool_random_dl(studies, level);
}

}  // namespace propmeta
