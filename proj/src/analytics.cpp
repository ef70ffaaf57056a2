#include "fptlab/analytics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fptlab/errors.hpp"
#include "fptlab/numerics.hpp"

namespace fptlab {

void validate(const DriftModel& model) {
  std::visit(overloaded{
                 [](const BmDrift& m) {
                   if (!std::isfinite(m.mu)) throw ValidationError("BM drift mu must be finite");
                 },
                 [](const TanhDrift& m) {
                   if (!(m.alpha > 0.0) || !std::isfinite(m.alpha) || !std::isfinite(m.beta))
                     throw ValidationError("tanh drift requires finite alpha > 0 and finite beta");
                 },
                 [](const Taboo& m) {
                   if (!std::isfinite(m.b)) throw ValidationError("taboo state b must be finite");
                 },
             },
             model);
}

void validate(const DriftModel& model, const BarrierSetup& setup) {
  validate(model);
  if (!std::isfinite(setup.a) || !std::isfinite(setup.x0) || !std::isfinite(setup.t0))
    throw ValidationError("barrier setup must be finite");
  if (!(setup.x0 < setup.a)) throw ValidationError("start x0 must lie below the barrier a");
  if (setup.t0 < 0.0) throw ValidationError("start time t0 must be nonnegative");
  if (const auto* tb = std::get_if<Taboo>(&model); tb && !(setup.a < tb->b))
    throw ValidationError("taboo runs require x0 < a < b");
}

std::string describe(const DriftModel& model) {
  std::ostringstream out;
  out.precision(17);
  std::visit(overloaded{
                 [&](const BmDrift& m) { out << "BM(mu=" << m.mu << ")"; },
                 [&](const TanhDrift& m) {
                   out << "tanh(alpha=" << m.alpha << ",beta=" << m.beta << ")";
                 },
                 [&](const Taboo& m) { out << "taboo(b=" << m.b << ")"; },
             },
             model);
  return out.str();
}

}  // namespace fptlab

namespace fptlab::analytics {

namespace nx = numerics;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_below_taboo(const DriftModel& model, double x, const char* what) {
  if (const auto* tb = std::get_if<Taboo>(&model); tb && !(x < tb->b)) {
    std::ostringstream msg;
    msg << what << ": taboo process evaluated at x = " << x << " >= b = " << tb->b;
    throw DomainError(msg.str());
  }
}

// log of the space factor h(x) with Z = h(w_end)/h(w_start) * exp(-k (t_end - t_start))
// and the corresponding killing rate k.
double log_space_factor(const DriftModel& model, double x) {
  return std::visit(overloaded{
                        [&](const BmDrift& m) { return m.mu * x; },
                        [&](const TanhDrift& m) { return nx::log_cosh(m.alpha * x + m.beta); },
                        [&](const Taboo& m) { return std::log(m.b - x); },
                    },
                    model);
}

double dlog_space_factor(const DriftModel& model, double x) {
  return std::visit(overloaded{
                        [&](const BmDrift& m) { return m.mu; },
                        [&](const TanhDrift& m) { return m.alpha * std::tanh(m.alpha * x + m.beta); },
                        [&](const Taboo& m) { return -1.0 / (m.b - x); },
                    },
                    model);
}

double time_rate(const DriftModel& model) {
  return std::visit(overloaded{
                        [](const BmDrift& m) { return 0.5 * m.mu * m.mu; },
                        [](const TanhDrift& m) { return 0.5 * m.alpha * m.alpha; },
                        [](const Taboo&) { return 0.0; },
                    },
                    model);
}

// log of the driftless kernel killed at a: gauss(y - x) * (1 - exp(-2 (a-x)(a-y)/tau)).
double log_killed_kernel(double a, double x, double y, double tau) {
  if (!(y < a)) return kNegInf;
  return nx::log_gauss(y - x, tau) + nx::log1mexp(2.0 * (a - x) * (a - y) / tau);
}

void require_forward(SpaceTimePoint from, SpaceTimePoint to) {
  if (!(to.t > from.t)) throw DomainError("propagator requires to.t > from.t");
}

}  // namespace

double drift_value(const DriftModel& model, SpaceTimePoint p) {
  require_below_taboo(model, p.x, "drift_value");
  return dlog_space_factor(model, p.x);
}

double girsanov_weight(const DriftModel& model, double w_start, double w_end, double t_start,
                       double t_end) {
  if (!(t_end > t_start)) throw DomainError("girsanov_weight requires t_end > t_start");
  require_below_taboo(model, w_start, "girsanov_weight");
  require_below_taboo(model, w_end, "girsanov_weight");
  return std::exp(log_space_factor(model, w_end) - log_space_factor(model, w_start) -
                  time_rate(model) * (t_end - t_start));
}

double propagator_free(const DriftModel& model, SpaceTimePoint from, SpaceTimePoint to) {
  require_forward(from, to);
  const double tau = to.t - from.t;
  if (const auto* tb = std::get_if<Taboo>(&model)) {
    require_below_taboo(model, from.x, "propagator_free");
    if (!(to.x < tb->b)) return 0.0;
    return std::exp(log_space_factor(model, to.x) - log_space_factor(model, from.x) +
                    log_killed_kernel(tb->b, from.x, to.x, tau));
  }
  if (const auto* bm = std::get_if<BmDrift>(&model)) {
    return std::exp(nx::log_gauss(to.x - from.x - bm->mu * tau, tau));
  }
  return std::exp(log_space_factor(model, to.x) - log_space_factor(model, from.x) -
                  time_rate(model) * tau + nx::log_gauss(to.x - from.x, tau));
}

double log_propagator_absorbed(const DriftModel& model, double a, SpaceTimePoint from,
                               SpaceTimePoint to) {
  require_forward(from, to);
  if (!(from.x < a)) throw DomainError("absorbed propagator requires from.x < a");
  require_below_taboo(model, from.x, "propagator_absorbed");
  if (!(to.x < a)) return kNegInf;
  const double tau = to.t - from.t;
  return log_space_factor(model, to.x) - log_space_factor(model, from.x) -
         time_rate(model) * tau + log_killed_kernel(a, from.x, to.x, tau);
}

double propagator_absorbed(const DriftModel& model, const BarrierSetup& setup,
                           SpaceTimePoint from, SpaceTimePoint to) {
  return std::exp(log_propagator_absorbed(model, setup.a, from, to));
}

double propagator_absorbed_dlog_dfrom(const DriftModel& model, double a, SpaceTimePoint from,
                                      SpaceTimePoint to) {
  require_forward(from, to);
  if (!(from.x < a)) throw DomainError("absorbed propagator requires from.x < a");
  const double tau = to.t - from.t;
  const double d = a - from.x;
  const double c = 2.0 * (a - to.x) / tau;
  const double image = c > 0.0 ? -c / std::expm1(c * d) : -1.0 / d;
  return (to.x - from.x) / tau + image - dlog_space_factor(model, from.x);
}

double log_fpt_density(const DriftModel& model, double a, SpaceTimePoint from, double t_hit) {
  if (!(from.x < a)) throw DomainError("fpt density requires a start below the barrier");
  require_below_taboo(model, from.x, "fpt_density");
  const double s = t_hit - from.t;
  if (!(s > 0.0)) return kNegInf;
  const double d = a - from.x;
  // -1/2 d/dx p_a at x = a: h(a)/h(x1) e^{-k s} * d / sqrt(2 pi s^3) e^{-d^2 / 2s}
  return log_space_factor(model, a) - log_space_factor(model, from.x) - time_rate(model) * s +
         std::log(d) - 1.5 * std::log(s) - nx::kLogSqrt2Pi - 0.5 * d * d / s;
}

double fpt_density(const DriftModel& model, const BarrierSetup& setup, double t_hit) {
  return std::exp(log_fpt_density(model, setup.a, {setup.x0, setup.t0}, t_hit));
}

double fpt_density_dlog_dstart(const DriftModel& model, double a, SpaceTimePoint from,
                               double t_hit) {
  const double s = t_hit - from.t;
  if (!(s > 0.0)) throw DomainError("fpt density gradient requires t_hit > from.t");
  const double d = a - from.x;
  return -1.0 / d + d / s - dlog_space_factor(model, from.x);
}

double absorption_probability(const DriftModel& model, const BarrierSetup& setup) {
  validate(model, setup);
  const double d = setup.a - setup.x0;
  const double raw = std::visit(
      overloaded{
          [&](const BmDrift& m) { return m.mu >= 0.0 ? 1.0 : std::exp(2.0 * m.mu * d); },
          [&](const TanhDrift& m) {
            return std::exp(nx::log_cosh(m.alpha * setup.a + m.beta) -
                            nx::log_cosh(m.alpha * setup.x0 + m.beta) - m.alpha * d);
          },
          [&](const Taboo& m) { return (m.b - setup.a) / (m.b - setup.x0); },
      },
      model);
  return nx::clamp_probability(raw, "absorption_probability");
}

double survival_forever(const DriftModel& model, const BarrierSetup& setup) {
  validate(model, setup);
  const double d = setup.a - setup.x0;
  const double raw = std::visit(
      overloaded{
          [&](const BmDrift& m) { return m.mu >= 0.0 ? 0.0 : -std::expm1(2.0 * m.mu * d); },
          [&](const TanhDrift& m) {
            return -std::expm1(nx::log_cosh(m.alpha * setup.a + m.beta) -
                               nx::log_cosh(m.alpha * setup.x0 + m.beta) - m.alpha * d);
          },
          [&](const Taboo& m) { return d / (m.b - setup.x0); },
      },
      model);
  return nx::clamp_probability(raw, "survival_forever");
}

double survival_to_T(const DriftModel& model, const BarrierSetup& setup, double T) {
  validate(model, setup);
  const double tau = T - setup.t0;
  if (!(tau > 0.0)) return 1.0;
  const double d = setup.a - setup.x0;
  const double root = std::sqrt(2.0 * tau);
  const double raw = std::visit(
      overloaded{
          [&](const BmDrift& m) {
            return 1.0 - 0.5 * (nx::erfc_safe((d - m.mu * tau) / root) +
                                nx::exp_times_erfc(2.0 * m.mu * d, (d + m.mu * tau) / root));
          },
          [&](const TanhDrift& m) {
            const double lc = nx::log_cosh(m.alpha * setup.a + m.beta) -
                              nx::log_cosh(m.alpha * setup.x0 + m.beta);
            return 1.0 - 0.5 * (nx::exp_times_erfc(lc + m.alpha * d, (d + m.alpha * tau) / root) +
                                nx::exp_times_erfc(lc - m.alpha * d, (d - m.alpha * tau) / root));
          },
          [&](const Taboo& m) {
            return (d + (m.b - setup.a) * std::erf(d / root)) / (m.b - setup.x0);
          },
      },
      model);
  return nx::clamp_probability(raw, "survival_to_T");
}

}  // namespace fptlab::analytics
