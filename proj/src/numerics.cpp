#include "fptlab/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <sstream>

namespace fptlab::numerics {

double erfc_safe(double z) {
  if (z > 26.0) return 0.0;
  if (z < -26.0) return 2.0;
  return std::erfc(z);
}

double log_erfc(double z) {
  if (z < 26.0) return std::log(std::erfc(z));
  // erfc(z) ~ exp(-z^2) / (z sqrt(pi)) * (1 - 1/(2z^2) + 3/(4z^4) - 15/(8z^6) + 105/(16z^8))
  const double u = 1.0 / (z * z);
  const double series = 1.0 + u * (-0.5 + u * (0.75 + u * (-1.875 + u * 6.5625)));
  return -z * z - std::log(z) - 0.5 * std::log(M_PI) + std::log(series);
}

double log_sum_slope(std::span<const LogTerm> terms) {
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) shift = std::max(shift, t.log_w);
  double num = 0.0;
  double den = 0.0;
  for (const auto& t : terms) {
    if (t.log_w == -std::numeric_limits<double>::infinity()) continue;
    const double w = std::exp(t.log_w - shift);
    den += w;
    num += w * t.slope;
  }
  return num / den;
}

double log_sum(std::span<const LogTerm> terms) {
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) shift = std::max(shift, t.log_w);
  double s = 0.0;
  for (const auto& t : terms) s += std::exp(t.log_w - shift);
  return shift + std::log(s);
}

namespace {

std::mutex g_handler_mutex;
WarningHandler g_handler;
std::atomic<std::size_t> g_warning_count{0};

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(g_handler_mutex);
  std::swap(g_handler, handler);
  return handler;
}

std::size_t warning_count() { return g_warning_count.load(); }

double clamp_probability(double raw, std::string_view what) {
  if (raw < -kProbabilitySlack || raw > 1.0 + kProbabilitySlack || std::isnan(raw)) {
    g_warning_count.fetch_add(1);
    std::lock_guard lock(g_handler_mutex);
    if (g_handler) {
      std::ostringstream msg;
      msg.precision(17);
      msg << what << ": raw probability " << raw << " outside [0, 1]";
      g_handler(msg.str());
    }
  }
  if (std::isnan(raw)) return raw;
  return std::clamp(raw, 0.0, 1.0);
}

}  // namespace fptlab::numerics
