#include <cmath>
#include <limits>
#include <sstream>

#include "fptlab/analytics.hpp"
#include "fptlab/conditioning.hpp"
#include "fptlab/errors.hpp"
#include "fptlab/quadrature.hpp"

namespace fptlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const quadrature::Options kQuad{1e-10, 1e-14, 25};

void check_point(const BarrierSetup& setup, const FiniteHorizon& scheme, SpaceTimePoint p) {
  if (scheme.setup.a != setup.a || scheme.setup.x0 != setup.x0 || scheme.setup.t0 != setup.t0)
    throw ValidationError("finite-horizon target was built for a different barrier setup");
  if (!(p.x < setup.a)) throw DomainError("finite-horizon Q requires x < a");
  if (!(p.t < scheme.T) || p.t < setup.t0)
    throw DomainError("finite-horizon Q requires t0 <= t < T");
}

// Integrals of the target densities against the density ratios, and the same
// integrals weighted by d/dx log of the numerator density.
struct Sums {
  double q = 0.0;
  double dq = 0.0;
};

Sums finite_horizon_sums(const DriftModel& source, const BarrierSetup& setup,
                         const FiniteHorizon& scheme, SpaceTimePoint p, bool with_gradient) {
  const SpaceTimePoint start{setup.x0, setup.t0};
  const double a = setup.a;
  Sums out;

  auto fpt_ratio = [&](double ta) {
    return std::exp(analytics::log_fpt_density(source, a, p, ta) -
                    analytics::log_fpt_density(source, a, start, ta));
  };
  out.q += quadrature::integrate_after_start(
               [&](double ta) {
                 const double g = scheme.gamma_star(ta);
                 return g == 0.0 ? 0.0 : g * fpt_ratio(ta);
               },
               p.t, scheme.T, kQuad)
               .value;
  if (with_gradient) {
    out.dq += quadrature::integrate_after_start(
                  [&](double ta) {
                    const double g = scheme.gamma_star(ta);
                    if (g == 0.0) return 0.0;
                    return g * fpt_ratio(ta) *
                           analytics::fpt_density_dlog_dstart(source, a, p, ta);
                  },
                  p.t, scheme.T, kQuad)
                  .value;
  }

  if (scheme.p_star) {
    const SpaceTimePoint end_time{0.0, scheme.T};
    auto prop_ratio = [&](double y) {
      const SpaceTimePoint to{y, end_time.t};
      return std::exp(analytics::log_propagator_absorbed(source, a, p, to) -
                      analytics::log_propagator_absorbed(source, a, start, to));
    };
    out.q += quadrature::integrate(
                 [&](double y) {
                   if (!(y < a)) return 0.0;
                   const double ps = scheme.p_star(y);
                   return ps == 0.0 ? 0.0 : ps * prop_ratio(y);
                 },
                 -kInf, a, kQuad)
                 .value;
    if (with_gradient) {
      out.dq += quadrature::integrate(
                    [&](double y) {
                      if (!(y < a)) return 0.0;
                      const double ps = scheme.p_star(y);
                      if (ps == 0.0) return 0.0;
                      return ps * prop_ratio(y) *
                             analytics::propagator_absorbed_dlog_dfrom(source, a, p,
                                                                       {y, end_time.t});
                    },
                    -kInf, a, kQuad)
                    .value;
    }
  }
  return out;
}

}  // namespace

FiniteHorizon make_finite_horizon(double T, std::function<double(double)> gamma_star,
                                  std::function<double(double)> p_star,
                                  const BarrierSetup& setup, double tol) {
  if (!(T > setup.t0)) throw ValidationError("finite horizon T must exceed t0");
  if (!gamma_star) throw ValidationError("finite horizon requires a gamma_star density");
  const double absorbed =
      quadrature::integrate_after_start(gamma_star, setup.t0, T, kQuad).value;
  double surviving = 0.0;
  if (p_star) {
    surviving = quadrature::integrate(
                    [&](double y) { return y < setup.a ? p_star(y) : 0.0; }, -kInf, setup.a, kQuad)
                    .value;
  }
  if (std::abs(surviving - (1.0 - absorbed)) > tol) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "finite-horizon target inconsistent: int p_star = " << surviving
        << " but 1 - int gamma_star = " << 1.0 - absorbed;
    throw ValidationError(msg.str());
  }
  return FiniteHorizon{T, std::move(gamma_star), std::move(p_star), setup};
}

namespace conditioning {

double q_finite_horizon(const DriftModel& source, const BarrierSetup& setup,
                        const FiniteHorizon& scheme, SpaceTimePoint p) {
  validate(source, setup);
  check_point(setup, scheme, p);
  return finite_horizon_sums(source, setup, scheme, p, false).q;
}

double drift_finite_horizon(const DriftModel& source, const BarrierSetup& setup,
                            const FiniteHorizon& scheme, SpaceTimePoint p) {
  validate(source, setup);
  check_point(setup, scheme, p);
  // d/dx log Q under the integral sign; the source drift cancels against the
  // d/dx log h(x) part of each ratio.
  const Sums s = finite_horizon_sums(source, setup, scheme, p, true);
  return analytics::drift_value(source, p) + s.dq / s.q;
}

}  // namespace conditioning
}  // namespace fptlab
