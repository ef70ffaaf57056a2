#pragma once

// Closed-form drifts, Girsanov weights, propagators, first-passage densities
// and survival probabilities for BM(mu), tanh(alpha, beta) and taboo(b).
//
// All evaluations go through log space (stable log-cosh, log1mexp for the
// image term) so that alpha * x products or long horizons do not overflow.
// Probabilities are clamped to [0, 1] through numerics::clamp_probability.

#include "fptlab/types.hpp"

namespace fptlab::analytics {

/// mu(x) for the family; throws DomainError for taboo at x >= b.
double drift_value(const DriftModel& model, SpaceTimePoint p);

/// Girsanov weight Z between (w_start, t_start) and (w_end, t_end) of a
/// driftless path. It depends on the path only through its endpoints.
double girsanov_weight(const DriftModel& model, double w_start, double w_end, double t_start,
                       double t_end);

/// Transition density on the natural state space: the real line for BM and
/// tanh, (-inf, b) for taboo.
double propagator_free(const DriftModel& model, SpaceTimePoint from, SpaceTimePoint to);

/// Transition density of the process killed at setup.a. Zero at to.x >= a.
/// Only setup.a is used; the start is `from`.
double propagator_absorbed(const DriftModel& model, const BarrierSetup& setup,
                           SpaceTimePoint from, SpaceTimePoint to);
double log_propagator_absorbed(const DriftModel& model, double a, SpaceTimePoint from,
                               SpaceTimePoint to);

/// d/d(from.x) of log propagator_absorbed.
double propagator_absorbed_dlog_dfrom(const DriftModel& model, double a, SpaceTimePoint from,
                                      SpaceTimePoint to);

/// First-passage-time density to setup.a for a start at (setup.x0, setup.t0).
/// Defined as 0 at t_hit <= t0.
double fpt_density(const DriftModel& model, const BarrierSetup& setup, double t_hit);
double log_fpt_density(const DriftModel& model, double a, SpaceTimePoint from, double t_hit);

/// d/d(from.x) of log fpt density.
double fpt_density_dlog_dstart(const DriftModel& model, double a, SpaceTimePoint from,
                               double t_hit);

double absorption_probability(const DriftModel& model, const BarrierSetup& setup);
double survival_to_T(const DriftModel& model, const BarrierSetup& setup, double T);
double survival_forever(const DriftModel& model, const BarrierSetup& setup);

}  // namespace fptlab::analytics
