#pragma once

// Moment accumulation kernels for the exact-enumeration variance engine.
//
// Every variant computes, over paired arrays (w, t),
//   sum w,  sum w*t,  sum w*t^2
// with Kahan-compensated accumulators. The scalar kernel is the reference;
// vector kernels keep one compensated accumulator per lane and fold the lanes
// at the end, so they agree with the reference to a few ulps of the sums.

#include <span>
#include <string_view>

namespace propmeta::kernels {

struct Moments {
  double sum_w = 0.0;
  double sum_wt = 0.0;
  double sum_wt2 = 0.0;
};

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

Moments weighted_moments_scalar(std::span<const double> weights, std::span<const double> values);

/// True when the variant was compiled in and the running CPU supports it.
bool available(Isa isa);

/// Runs a specific variant. Throws std::invalid_argument if it is not available.
Moments weighted_moments(Isa isa, std::span<const double> weights, std::span<const double> values);

/// Runs the best available variant (or the forced one, see force_isa).
Moments weighted_moments(std::span<const double> weights, std::span<const double> values);

/// Best variant supported by this build and CPU.
Isa detected_isa();

/// Isa used by the dispatching overload.
Isa active_isa();

/// Pins the dispatching overload to one variant; std::nullopt-like reset via reset_isa().
void force_isa(Isa isa);
void reset_isa();

namespace detail {
#if defined(__x86_64__) || defined(_M_X64)
Moments weighted_moments_avx2(std::span<const double> weights, std::span<const double> values);
#endif
#if defined(__aarch64__)
Moments weighted_moments_neon(std::span<const double> weights, std::span<const double> values);
#endif
}  // namespace detail

}  // namespace propmeta::kernels
