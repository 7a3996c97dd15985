#include "propmeta/stabilization.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "propmeta/kernels.hpp"

namespace propmeta {

namespace {

void check_args(std::int64_t total, double p) {
  if (total < 1) throw DomainError("sample size must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability must lie in [0,1]");
}

}  // namespace

namespace detail {

std::vector<double> binomial_pmf(std::int64_t total, double p) {
  check_args(total, p);
  std::vector<double> pmf(static_cast<std::size_t>(total) + 1, 0.0);
  if (p == 0.0) {
    pmf.front() = 1.0;
    return pmf;
  }
  if (p == 1.0) {
    pmf.back() = 1.0;
    return pmf;
  }
  const double n = static_cast<double>(total);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_n_fact = std::lgamma(n + 1.0);
  for (std::int64_t a = 0; a <= total; ++a) {
    const double k = static_cast<double>(a);
    const double log_pmf = log_n_fact - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                           k * log_p + (n - k) * log_q;
    pmf[static_cast<std::size_t>(a)] = std::exp(log_pmf);
  }
  return pmf;
}

std::vector<double> transform_table(TransformKind kind, std::int64_t total) {
  if (total < 1) throw DomainError("sample size must be at least 1");
  std::vector<double> values(static_cast<std::size_t>(total) + 1);
  for (std::int64_t a = 0; a <= total; ++a) {
    values[static_cast<std::size_t>(a)] = forward(kind, a, total);
  }
  return values;
}

double variance_from_tables(std::span<const double> pmf, std::span<const double> values) {
  const kernels::Moments m = kernels::weighted_moments(pmf, values);
  if (!(m.sum_w > 0.0)) return 0.0;
  const double mean = m.sum_wt / m.sum_w;
  return std::max(0.0, m.sum_wt2 / m.sum_w - mean * mean);
}

}  // namespace detail

double exact_variance(TransformKind kind, std::int64_t total, double p) {
  check_args(total, p);
  if (p == 0.0 || p == 1.0) return 0.0;
  const auto pmf = detail::binomial_pmf(total, p);
  const auto values = detail::transform_table(kind, total);
  return detail::variance_from_tables(pmf, values);
}

std::vector<VariancePoint> variance_curve(TransformKind kind, std::int64_t total,
                                          std::span<const double> p_grid, unsigned threads) {
  if (total < 1) throw DomainError("sample size must be at least 1");
  for (double p : p_grid) check_args(total, p);
  std::vector<VariancePoint> out(p_grid.size());
  if (p_grid.empty()) return out;

  const auto values = detail::transform_table(kind, total);
  const double target = approx_variance(kind, static_cast<double>(total));

  auto fill = [&](std::size_t i) {
    const double p = p_grid[i];
    VariancePoint& pt = out[i];
    pt.p = p;
    pt.total = total;
    pt.target = target;
    pt.exact_variance =
        (p == 0.0 || p == 1.0) ? 0.0
                               : detail::variance_from_tables(detail::binomial_pmf(total, p), values);
    pt.ratio = pt.exact_variance / target;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, p_grid.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < p_grid.size(); ++i) fill(i);
    return out;
  }
  // Each worker owns a strided subset of indices; results land in grid order.
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < p_grid.size(); i += threads) fill(i);
      });
    }
  }
  return out;
}

double ratio_spread(std::span<const VariancePoint> curve) {
  if (curve.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(
      curve.begin(), curve.end(),
      [](const VariancePoint& a, const VariancePoint& b) { return a.ratio < b.ratio; });
  return hi->ratio - lo->ratio;
}

std::vector<double> default_p_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
  return grid;
}

std::vector<std::int64_t> default_totals() { return {10, 20, 50, 100, 500, 1000}; }

}  // namespace propmeta
