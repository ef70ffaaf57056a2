#pragma once

// Goodness-of-fit of simulated ensembles against closed-form laws, and the
// identity sweep of every closed-form conditioned drift against an
// independent transcription of its published formula.

#include <functional>
#include <string>
#include <vector>

#include "fptlab/sim.hpp"
#include "fptlab/types.hpp"

namespace fptlab::verify {

struct Tolerances {
  double ks = 0.0;          // 0 selects 1.63 / sqrt(n) + 0.005
  double absorption = 0.005;
  double survival = 0.01;
};

struct GoodnessReport {
  double ks_distance = 0.0;
  std::size_t n_absorbed = 0;
  double absorbed_fraction = 0.0;
  double analytic_absorption = 0.0;  // 1 - survival_to_T(horizon)
  double survival_curve_max_dev = 0.0;
  bool pass = false;
  Tolerances tolerances;  // with ks resolved
  std::string reference;
};

/// Kolmogorov-Smirnov distance between the sorted sample and cdf.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Absorbed times against the FPT law of `model` conditioned on absorption
/// before the horizon; survival compared at 8 evenly spaced checkpoints.
/// Throws ValidationError with fewer than 100 absorbed paths.
GoodnessReport ks_against_fpt(const sim::PathEnsemble& ensemble, const DriftModel& model,
                              const BarrierSetup& setup, Tolerances tol = {});

/// Delta-law targets have no continuous CDF: check mean and spread instead.
struct DiracReport {
  double t_star = 0.0;
  double absorbed_fraction = 0.0;
  double mean_tau = 0.0;
  double sd_tau = 0.0;
  bool pass = false;
};
DiracReport dirac_time_check(const sim::PathEnsemble& ensemble, double t_star,
                             double tolerance = 0.01);

/// max over checkpoints of |alive fraction - analytic(t)|.
double survival_curve_compare(const sim::PathEnsemble& ensemble,
                              const std::function<double(double)>& analytic,
                              const std::vector<double>& checkpoints);

/// max over checkpoints of the alive-fraction difference of two ensembles.
double survival_curve_gap(const sim::PathEnsemble& lhs, const sim::PathEnsemble& rhs,
                          const std::vector<double>& checkpoints);

struct SweepGrid {
  std::vector<double> xs;  // positions relative to a start at 0, below a = 1
  std::vector<double> ts;
};
SweepGrid default_sweep_grid();

struct TableRow {
  std::string id;
  std::string description;
  double max_deviation = 0.0;
};

/// One row per closed-form conditioning pair (7 survival/Dirac rows and 10
/// FPT-target rows), each on the grid with start 0, barrier 1.
std::vector<TableRow> table_identity_sweep(const SweepGrid& grid = default_sweep_grid());

}  // namespace fptlab::verify
