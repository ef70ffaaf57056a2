#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace fptlab::numerics {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2 pi))
inline constexpr double kLog2 = 0.69314718055994530942;

/// log(cosh(z)) without overflow: |z| + log1p(exp(-2|z|)) - log 2.
inline double log_cosh(double z) {
  const double az = std::abs(z);
  return az + std::log1p(std::exp(-2.0 * az)) - kLog2;
}

/// log(sinh(z)) for z > 0.
inline double log_sinh(double z) {
  return z + std::log1p(-std::exp(-2.0 * z)) - kLog2;
}

/// log(1 - exp(-y)) for y > 0, accurate at both ends.
inline double log1mexp(double y) {
  return y < kLog2 ? std::log(-std::expm1(-y)) : std::log1p(-std::exp(-y));
}

/// coth(z), z != 0.
inline double coth(double z) { return 1.0 / std::tanh(z); }

/// erfc with the asymptotic limits 0 / 2 substituted beyond |z| > 26.
double erfc_safe(double z);

/// log(erfc(z)); uses the asymptotic expansion for large positive z so that
/// products exp(c) * erfc(z) can be formed in log space.
double log_erfc(double z);

/// exp(c) * erfc(z) evaluated as exp(c + log_erfc(z)).
inline double exp_times_erfc(double c, double z) { return std::exp(c + log_erfc(z)); }

/// log of the centred Gaussian density with variance var.
inline double log_gauss(double dx, double var) {
  return -0.5 * dx * dx / var - 0.5 * std::log(var) - kLogSqrt2Pi;
}

/// log(exp(l1) + exp(l2)).
inline double log_add_exp(double l1, double l2) {
  if (l1 < l2) std::swap(l1, l2);
  if (l2 == -INFINITY) return l1;
  return l1 + std::log1p(std::exp(l2 - l1));
}

/// Stable (n1 e^{l1} + n2 e^{l2}) / (d1 e^{l1} + d2 e^{l2}); the dominant
/// exponential is factored out before dividing.
inline double exp_ratio(double l1, double n1, double d1, double l2, double n2, double d2) {
  if (l1 >= l2) {
    const double r = std::exp(l2 - l1);
    return (n1 + n2 * r) / (d1 + d2 * r);
  }
  const double r = std::exp(l1 - l2);
  return (n1 * r + n2) / (d1 * r + d2);
}

/// Positive term w = exp(log_w) of a sum, with slope = d/dx log w.
struct LogTerm {
  double log_w;
  double slope;
};

/// d/dx log(sum_i w_i) = sum_i w_i slope_i / sum_i w_i, weights shifted by the
/// largest log_w. Terms with log_w = -inf drop out.
double log_sum_slope(std::span<const LogTerm> terms);

/// log(sum_i w_i).
double log_sum(std::span<const LogTerm> terms);

// --- probability clamping with a warning channel --------------------------

using WarningHandler = std::function<void(const std::string&)>;

/// Installs a handler for out-of-range diagnostics; returns the previous one.
WarningHandler set_warning_handler(WarningHandler handler);
std::size_t warning_count();

inline constexpr double kProbabilitySlack = 1e-12;

/// Clamps to [0, 1]; reports through the warning channel when the raw value is
/// outside by more than kProbabilitySlack.
double clamp_probability(double raw, std::string_view what);

}  // namespace fptlab::numerics
