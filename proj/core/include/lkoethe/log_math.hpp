#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace lkoethe {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// A log-value counts as finite below this bound (~ log of the largest double).
inline constexpr double kFiniteLogLimit = 690.0;

// Blow-up guard in linear scale (1e300); log(1e300) ~ 690.8.
inline constexpr double kBlowUpGuard = 1e300;

inline bool is_finite_log(double log_value) {
  return !std::isnan(log_value) && log_value < kFiniteLogLimit;
}

// log(exp(a) + exp(b) + ...) with max-rescaling. Returns -inf for an empty
// range or when every argument is -inf.
double log_sum_exp(std::span<const double> args);

// Difference of two log-values treating (-inf) - (-inf) as 0.
inline double log_growth(double from, double to) {
  if (from == to) return 0.0;
  return to - from;
}

// log|x|, -inf for zero.
inline double log_abs(double x) { return x == 0.0 ? kNegInf : std::log(std::fabs(x)); }

}  // namespace lkoethe
