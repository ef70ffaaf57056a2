#pragma once

// Fixed-step Euler-Maruyama ensembles with an absorbing barrier at setup.a.
//
// Paths are independent by index: path i draws from its own generator seeded
// by (seed, i), so ensembles do not depend on the worker count
// (FPTLAB_THREADS caps it).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fptlab/conditioning.hpp"
#include "fptlab/types.hpp"

namespace fptlab::sim {

struct SimConfig {
  double dt = 1e-3;
  double horizon = 1.0;  // absolute end time
  std::size_t n_paths = 1000;
  std::uint64_t seed = 1;
  bool bridge_correction = true;
  double boundary_guard = 1e-9;
};

void validate(const SimConfig& cfg, const BarrierSetup& setup);

enum class PathStatus { Absorbed, Survived, Diverged };

struct PathOutcome {
  PathStatus status = PathStatus::Survived;
  double tau = 0.0;    // absorption time; horizon for survivors
  double x_end = 0.0;  // last position before absorption or at the horizon
  std::uint64_t n_steps = 0;
  double x_max = 0.0;
};

struct PathEnsemble {
  std::vector<PathOutcome> outcomes;
  SimConfig config;
  BarrierSetup setup;
  std::string model_label;
  std::size_t n_diverged = 0;
  std::string first_diagnostic;

  std::size_t n_absorbed() const;
  double absorbed_fraction() const;
  /// Fraction of paths not absorbed by time t (diverged paths excluded).
  double alive_fraction(double t) const;
  std::vector<double> absorbed_times() const;
};

/// Drift evaluator plus the boundary metadata the stepper needs.
struct DriftField {
  std::function<double(double, double)> f;
  /// Level the drift repels from. When equal to the barrier, paths are never
  /// absorbed and are clamped to singular_level - boundary_guard.
  std::optional<double> singular_level;
  /// Dirac endgame: stop at terminal_time - dt and absorb at terminal_time.
  std::optional<double> terminal_time;
  std::string label;
};

DriftField drift_field(const DriftModel& model);
DriftField drift_field(const ConditionedDrift& drift);

/// Throws SimulationError if more than 0.1% of the paths diverge.
PathEnsemble simulate_ensemble(const DriftField& drift, const BarrierSetup& setup,
                               const SimConfig& cfg);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Mean of Z(t) h(W(t)) over driftless paths started at (base.x0, base.t0).
/// The weight depends only on the endpoint, except for taboo where paths
/// touching b (bridge test included) get weight 0; taboo paths are stepped
/// with cfg.dt, the others are sampled at t directly. base.a is not used.
Estimate simulate_reweighted_expectation(const BarrierSetup& base, const DriftModel& weight_model,
                                         const std::function<double(double)>& h, double t,
                                         const SimConfig& cfg);

std::size_t worker_count(std::size_t n_tasks);

}  // namespace fptlab::sim
