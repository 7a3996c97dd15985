#pragma once

namespace propmeta {

/// Standard normal quantile function.
double inverse_normal_cdf(double prob);

/// Two-sided critical value z such that P(|Z| <= z) = level. Exact table for
/// 0.90, 0.95 and 0.99; inverse_normal_cdf otherwise.
double z_for_level(double level);

}  // namespace propmeta
