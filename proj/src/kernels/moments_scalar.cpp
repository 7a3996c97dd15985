#include "propmeta/kernels.hpp"

#include <stdexcept>

namespace propmeta::kernels {

namespace {

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

Moments weighted_moments_scalar(std::span<const double> weights, std::span<const double> values) {
  if (weights.size() != values.size()) {
    throw std::invalid_argument("weighted_moments: weights and values differ in length");
  }
  Kahan w, wt, wt2;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double wx = weights[i] * values[i];
    w.add(weights[i]);
    wt.add(wx);
    wt2.add(wx * values[i]);
  }
  return {w.sum, wt.sum, wt2.sum};
}

}  // namespace propmeta::kernels
