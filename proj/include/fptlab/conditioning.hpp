#pragma once

// Q-functions and conditioned drifts mu*(x,t) = mu(x) + d/dx log Q(x,t) for
// the conditioning schemes available in closed form, plus the finite-horizon
// construction by quadrature and the reciprocity check.
//
// Closed forms are written for a start at the origin; a general start
// (x0, t0) is handled by translating x, t and the family parameters
// (beta -> beta + alpha x0, delta -> delta + gamma x0, b -> b - x0).

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fptlab/types.hpp"

namespace fptlab {

/// Absorption forced at the single time t_star.
struct DiracTime {
  double t_star = 1.0;
};

struct ForeverSurvival {};

/// Target law: FPT density of BM(mu) started at the same point; for mu < 0
/// the missing mass e^{2 mu (a - x0)} is assigned to forever survival.
struct FptOfBM {
  double mu = 0.0;
};

/// Target law: FPT density of tanh(gamma, delta) plus its forever survival.
struct FptOfTanh {
  double gamma = 1.0;
  double delta = 0.0;
};

/// Target law: FPT density of taboo(b) plus its forever survival.
struct FptOfTaboo {
  double b = 2.0;
};

/// Prescribed FPT density gamma_star on (t0, T] and endpoint density p_star on
/// (-inf, a] at time T. Build with make_finite_horizon, which checks that the
/// two carry complementary mass.
struct FiniteHorizon {
  double T = 1.0;
  std::function<double(double)> gamma_star;
  std::function<double(double)> p_star;  // empty means identically zero
  BarrierSetup setup;
};

using ConditioningScheme =
    std::variant<DiracTime, ForeverSurvival, FptOfBM, FptOfTanh, FptOfTaboo, FiniteHorizon>;

/// Throws ValidationError if |int p_star - (1 - int gamma_star)| > tol.
FiniteHorizon make_finite_horizon(double T, std::function<double(double)> gamma_star,
                                  std::function<double(double)> p_star,
                                  const BarrierSetup& setup, double tol = 1e-6);

std::string describe(const ConditioningScheme& scheme);

struct QFunction {
  std::function<double(double, double)> evaluator;
  bool closed_form = true;
  std::string description;

  double operator()(double x, double t) const { return evaluator(x, t); }
};

struct ConditionedDrift {
  DriftModel source;
  ConditioningScheme scheme;
  BarrierSetup setup;
  std::function<double(double, double)> evaluator;
  std::string label;
  /// Level the drift repels from without ever reaching (the barrier for
  /// forever survival and Dirac conditioning).
  std::optional<double> singular_level;
  /// Time at which every path is absorbed (Dirac conditioning).
  std::optional<double> terminal_time;

  double operator()(double x, double t) const { return evaluator(x, t); }
};

/// Dispatches (source, scheme, sign of mu) to its closed-form branch.
/// Throws DispatchError for unsupported pairs and ValidationError for bad
/// parameters.
ConditionedDrift make_conditioned_drift(const DriftModel& source, const BarrierSetup& setup,
                                        const ConditioningScheme& scheme);

/// Q for every closed-form pair (including DiracTime and ForeverSurvival) and
/// the quadrature Q for FiniteHorizon.
QFunction make_q_function(const DriftModel& source, const BarrierSetup& setup,
                          const ConditioningScheme& scheme);

/// Human-readable list of supported (source, scheme) pairs.
std::string supported_pairs();

namespace conditioning {

/// Distance to a singular boundary below which evaluation is refused.
inline constexpr double kGuardBand = 1e-12;

double q_finite_horizon(const DriftModel& source, const BarrierSetup& setup,
                        const FiniteHorizon& scheme, SpaceTimePoint p);
double drift_finite_horizon(const DriftModel& source, const BarrierSetup& setup,
                            const FiniteHorizon& scheme, SpaceTimePoint p);

/// -1/(a-x) + (a-x)/(t_star - t), for t < t_star.
double drift_dirac_time(const BarrierSetup& setup, double t_star, SpaceTimePoint p);

double drift_forever_survival(const DriftModel& source, const BarrierSetup& setup,
                              SpaceTimePoint p);
double drift_tanh_on_bm_fpt(const TanhDrift& source, const BarrierSetup& setup, double mu,
                            SpaceTimePoint p);
double drift_tanh_on_tanh_fpt(const TanhDrift& source, const BarrierSetup& setup,
                              const FptOfTanh& target, SpaceTimePoint p);
double drift_bm_on_tanh_fpt(const BmDrift& source, const BarrierSetup& setup,
                            const TanhDrift& target, SpaceTimePoint p);
double drift_bm_on_taboo_fpt(const BmDrift& source, const BarrierSetup& setup, double b_target,
                             SpaceTimePoint p);
double drift_taboo_on_bm_fpt(const Taboo& source, const BarrierSetup& setup, double mu,
                             SpaceTimePoint p);

/// Closed-form Q for ForeverSurvival, DiracTime and the FPT-target pairs.
double q_forever_and_partial(const DriftModel& source, const BarrierSetup& setup,
                             const ConditioningScheme& scheme, SpaceTimePoint p);

/// Density of tanh(alpha, beta) conditioned on the tanh(gamma, delta) FPT law,
/// origin start only.
double conditioned_propagator_tanh_on_tanh(const TanhDrift& source, const BarrierSetup& setup,
                                           const FptOfTanh& target, SpaceTimePoint p);
double conditioned_survival_tanh_on_tanh(const FptOfTanh& target, const BarrierSetup& setup,
                                         double t);

/// max over grid of |q_forward * q_backward - 1|.
double reciprocity_check(const QFunction& q_forward, const QFunction& q_backward,
                         const std::vector<SpaceTimePoint>& grid);

}  // namespace conditioning
}  // namespace fptlab
