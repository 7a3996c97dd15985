#include "propmeta/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <array>
#include <stdexcept>

namespace propmeta::kernels::detail {

namespace {

struct Kahan2 {
  float64x2_t sum;
  float64x2_t carry;
};

inline void add(Kahan2& acc, float64x2_t x) {
  const float64x2_t y = vsubq_f64(x, acc.carry);
  const float64x2_t t = vaddq_f64(acc.sum, y);
  acc.carry = vsubq_f64(vsubq_f64(t, acc.sum), y);
  acc.sum = t;
}

inline double fold(const Kahan2& acc, double tail_sum, double tail_carry) {
  const std::array<double, 3> parts{vgetq_lane_f64(acc.sum, 0), vgetq_lane_f64(acc.sum, 1),
                                    tail_sum};
  const std::array<double, 3> carries{vgetq_lane_f64(acc.carry, 0),
                                      vgetq_lane_f64(acc.carry, 1), tail_carry};
  double sum = 0.0;
  double carry = 0.0;
  auto push = [&](double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  };
  for (double p : parts) push(p);
  for (double c : carries) push(-c);
  return sum;
}

}  // namespace

Moments weighted_moments_neon(std::span<const double> weights, std::span<const double> values) {
  if (weights.size() != values.size()) {
    throw std::invalid_argument("weighted_moments: weights and values differ in length");
  }
  const std::size_t n = weights.size();
  const std::size_t body = n - n % 2;
  Kahan2 w{vdupq_n_f64(0.0), vdupq_n_f64(0.0)};
  Kahan2 wt = w;
  Kahan2 wt2 = w;
  for (std::size_t i = 0; i < body; i += 2) {
    const float64x2_t wv = vld1q_f64(weights.data() + i);
    const float64x2_t tv = vld1q_f64(values.data() + i);
    const float64x2_t wx = vmulq_f64(wv, tv);
    add(w, wv);
    add(wt, wx);
    add(wt2, vmulq_f64(wx, tv));
  }
  double ts[3] = {0.0, 0.0, 0.0};
  if (body < n) {
    const double wx = weights[body] * values[body];
    ts[0] = weights[body];
    ts[1] = wx;
    ts[2] = wx * values[body];
  }
  return {fold(w, ts[0], 0.0), fold(wt, ts[1], 0.0), fold(wt2, ts[2], 0.0)};
}

}  // namespace propmeta::kernels::detail

#endif
