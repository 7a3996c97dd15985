#include <atomic>
#include <stdexcept>
#include <string>

#include "propmeta/kernels.hpp"

namespace propmeta::kernels {

namespace {

// -1: no override.
std::atomic<int> g_forced{-1};

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "?";
}

bool available(Isa isa) { return cpu_has(isa); }

Isa detected_isa() {
  static const Isa best = [] {
    if (cpu_has(Isa::Avx2)) return Isa::Avx2;
    if (cpu_has(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
  }();
  return best;
}

Isa active_isa() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  return forced < 0 ? detected_isa() : static_cast<Isa>(forced);
}

void force_isa(Isa isa) {
  if (!available(isa)) {
    throw std::invalid_argument("kernel variant '" + std::string(to_string(isa)) +
                                "' is not available on this machine");
  }
  g_forced.store(static_cast<int>(isa), std::memory_order_relaxed);
}

void reset_isa() { g_forced.store(-1, std::memory_order_relaxed); }

Moments weighted_moments(Isa isa, std::span<const double> weights,
                         std::span<const double> values) {
  switch (isa) {
    case Isa::Scalar:
      return weighted_moments_scalar(weights, values);
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      if (cpu_has(Isa::Avx2)) return detail::weighted_moments_avx2(weights, values);
#endif
      break;
    case Isa::Neon:
#if defined(__aarch64__)
      return detail::weighted_moments_neon(weights, values);
#endif
      break;
  }
  throw std::invalid_argument("kernel variant '" + std::string(to_string(isa)) +
                              "' is not available on this machine");
}

Moments weighted_moments(std::span<const double> weights, std::span<const double> values) {
  return weighted_moments(active_isa(), weights, values);
}

}  // namespace propmeta::kernels
