#include "propmeta/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <array>
#include <stdexcept>

namespace propmeta::kernels::detail {

namespace {

// Four-lane Kahan accumulator.
struct Kahan4 {
  __m256d sum;
  __m256d carry;
};

__attribute__((target("avx2"))) inline void add(Kahan4& acc, __m256d x) {
  const __m256d y = _mm256_sub_pd(x, acc.carry);
  const __m256d t = _mm256_add_pd(acc.sum, y);
  acc.carry = _mm256_sub_pd(_mm256_sub_pd(t, acc.sum), y);
  acc.sum = t;
}

// Folds the lanes (and their carries) with scalar Kahan, in lane order.
__attribute__((target("avx2"))) inline double fold(const Kahan4& acc, double tail_sum,
                                                   double tail_carry) {
  alignas(32) std::array<double, 4> s;
  alignas(32) std::array<double, 4> c;
  _mm256_store_pd(s.data(), acc.sum);
  _mm256_store_pd(c.data(), acc.carry);
  double sum = 0.0;
  double carry = 0.0;
  auto push = [&](double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  };
  for (int i = 0; i < 4; ++i) push(s[i]);
  push(tail_sum);
  for (int i = 0; i < 4; ++i) push(-c[i]);
  push(-tail_carry);
  return sum;
}

}  // namespace

__attribute__((target("avx2"))) Moments weighted_moments_avx2(std::span<const double> weights,
                                                               std::span<const double> values) {
  if (weights.size() != values.size()) {
    throw std::invalid_argument("weighted_moments: weights and values differ in length");
  }
  const std::size_t n = weights.size();
  const std::size_t body = n - n % 4;
  Kahan4 w{_mm256_setzero_pd(), _mm256_setzero_pd()};
  Kahan4 wt = w;
  Kahan4 wt2 = w;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d wv = _mm256_loadu_pd(weights.data() + i);
    const __m256d tv = _mm256_loadu_pd(values.data() + i);
    const __m256d wx = _mm256_mul_pd(wv, tv);
    add(w, wv);
    add(wt, wx);
    add(wt2, _mm256_mul_pd(wx, tv));
  }

  // Remainder in scalar Kahan.
  std::array<double, 3> ts{}, tc{};
  for (std::size_t i = body; i < n; ++i) {
    const double wx = weights[i] * values[i];
    const std::array<double, 3> xs{weights[i], wx, wx * values[i]};
    for (int k = 0; k < 3; ++k) {
      const double y = xs[k] - tc[k];
      const double t = ts[k] + y;
      tc[k] = (t - ts[k]) - y;
      ts[k] = t;
    }
  }
  return {fold(w, ts[0], tc[0]), fold(wt, ts[1], tc[1]), fold(wt2, ts[2], tc[2])};
}

}  // namespace propmeta::kernels::detail

#endif
