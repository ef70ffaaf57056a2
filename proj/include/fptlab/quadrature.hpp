#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

namespace fptlab::quadrature {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

struct Options {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  unsigned max_depth = 25;
};

// Throws QuadratureError carrying the achieved estimate.
[[noreturn]] void report_nonconvergence(double value, double error, double lo, double hi);

/// Adaptive 31-point Gauss-Kronrod on [lo, hi]; either bound may be infinite.
template <class F>
Result integrate(F&& f, double lo, double hi, const Options& opt = {}) {
  if (lo == hi) return {};
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, lo, hi, opt.max_depth, opt.rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > std::max(opt.rel_tol * l1, opt.abs_tol) * 1e3) {
    report_nonconvergence(value, error, lo, hi);
  }
  return {value, error};
}

/// Integral over (lo, hi] of an integrand with a (hi - lo)^{-3/2}-type
/// behaviour at lo, after the substitution u = 1 / (t - lo). hi may be +inf.
template <class F>
Result integrate_after_start(F&& f, double lo, double hi, const Options& opt = {}) {
  const double u_lo = std::isinf(hi) ? 0.0 : 1.0 / (hi - lo);
  auto g = [&](double u) {
    if (u <= 0.0 || std::isinf(u)) return 0.0;
    return f(lo + 1.0 / u) / (u * u);
  };
  return integrate(g, u_lo, std::numeric_limits<double>::infinity(), opt);
}

/// Integral over (lo, hi] of a first-passage-type integrand
/// ~ s^{-3/2} e^{-d^2 / 2s}, s = t - lo, with hi possibly infinite. The head
/// (lo, lo + split] uses u = 1 / s; an infinite tail uses s = 1 / u^2, which
/// turns the s^{-3/2} decay into a bounded integrand.
template <class F>
Result integrate_first_passage(F&& f, double lo, double hi, double split = 1.0,
                               const Options& opt = {}) {
  if (!std::isinf(hi) && hi - lo <= split) return integrate_after_start(f, lo, hi, opt);
  const Result head = integrate_after_start(f, lo, lo + split, opt);
  Result tail;
  if (std::isinf(hi)) {
    auto g = [&](double u) {
      if (u <= 0.0) return 0.0;
      return 2.0 * f(lo + 1.0 / (u * u)) / (u * u * u);
    };
    tail = integrate(g, 0.0, 1.0 / std::sqrt(split), opt);
  } else {
    tail = integrate(f, lo + split, hi, opt);
  }
  return {head.value + tail.value, head.error + tail.error};
}

}  // namespace fptlab::quadrature
