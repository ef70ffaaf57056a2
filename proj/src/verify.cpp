#include "fptlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fptlab/analytics.hpp"
#include "fptlab/conditioning.hpp"
#include "fptlab/errors.hpp"
#include "fptlab/transcriptions.hpp"

namespace fptlab::verify {

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ValidationError("KS distance of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n),
                  std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

GoodnessReport ks_against_fpt(const sim::PathEnsemble& ensemble, const DriftModel& model,
                              const BarrierSetup& setup, Tolerances tol) {
  const auto times = ensemble.absorbed_times();
  if (times.size() < 100) {
    std::ostringstream msg;
    msg << "KS test needs at least 100 absorbed paths, got " << times.size();
    throw ValidationError(msg.str());
  }
  const double horizon = ensemble.config.horizon;
  const double mass = 1.0 - analytics::survival_to_T(model, setup, horizon);
  auto cdf = [&](double t) {
    return std::min(1.0, (1.0 - analytics::survival_to_T(model, setup, t)) / mass);
  };

  GoodnessReport r;
  r.reference = describe(model);
  r.n_absorbed = times.size();
  r.ks_distance = ks_distance(times, cdf);
  r.absorbed_fraction = ensemble.absorbed_fraction();
  r.analytic_absorption = mass;
  std::vector<double> checkpoints;
  for (int k = 1; k <= 8; ++k) checkpoints.push_back(setup.t0 + (horizon - setup.t0) * k / 8.0);
  r.survival_curve_max_dev = survival_curve_compare(
      ensemble, [&](double t) { return analytics::survival_to_T(model, setup, t); }, checkpoints);
  if (tol.ks <= 0.0) tol.ks = 1.63 / std::sqrt(static_cast<double>(times.size())) + 0.005;
  r.tolerances = tol;
  r.pass = r.ks_distance <= tol.ks &&
           std::abs(r.absorbed_fraction - r.analytic_absorption) <= tol.absorption &&
           r.survival_curve_max_dev <= tol.survival;
  return r;
}

DiracReport dirac_time_check(const sim::PathEnsemble& ensemble, double t_star, double tolerance) {
  DiracReport r;
  r.t_star = t_star;
  const auto times = ensemble.absorbed_times();
  r.absorbed_fraction = ensemble.absorbed_fraction();
  if (!times.empty()) {
    double sum = 0.0;
    for (double t : times) sum += t;
    r.mean_tau = sum / static_cast<double>(times.size());
    double ss = 0.0;
    for (double t : times) ss += (t - r.mean_tau) * (t - r.mean_tau);
    r.sd_tau = times.size() > 1 ? std::sqrt(ss / static_cast<double>(times.size() - 1)) : 0.0;
  }
  r.pass = r.absorbed_fraction == 1.0 && r.mean_tau >= t_star - tolerance &&
           r.mean_tau <= t_star && r.sd_tau <= tolerance;
  return r;
}

double survival_curve_compare(const sim::PathEnsemble& ensemble,
                              const std::function<double(double)>& analytic,
                              const std::vector<double>& checkpoints) {
  double worst = 0.0;
  for (double t : checkpoints) {
    worst = std::max(worst, std::abs(ensemble.alive_fraction(t) - analytic(t)));
  }
  return worst;
}

double survival_curve_gap(const sim::PathEnsemble& lhs, const sim::PathEnsemble& rhs,
                          const std::vector<double>& checkpoints) {
  double worst = 0.0;
  for (double t : checkpoints) {
    worst = std::max(worst, std::abs(lhs.alive_fraction(t) - rhs.alive_fraction(t)));
  }
  return worst;
}

SweepGrid default_sweep_grid() {
  SweepGrid g;
  // a = 1 with start 0; the layer 1e-3 below the barrier is excluded.
  for (int i = 0; i < 12; ++i) g.xs.push_back(-2.0 + (1.0 - 1e-3 + 2.0) * i / 11.0);
  for (int j = 0; j < 12; ++j) g.ts.push_back(0.05 + 2.95 * j / 11.0);
  return g;
}

namespace {

struct RowSpec {
  std::string id;
  std::string description;
  DriftModel source;
  ConditioningScheme scheme;
  std::function<double(double, double)> transcription;
};

}  // namespace

std::vector<TableRow> table_identity_sweep(const SweepGrid& grid) {
  namespace tr = transcribed;
  const BarrierSetup setup{1.0, 0.0, 0.0};
  const double a = setup.a;
  const double t_star = 4.0;
  const double mu_pos = 0.4;
  const double mu_neg = -0.6;
  const double alpha = 0.8;
  const double beta = 0.3;
  const double gamma = 0.5;
  const double delta = 0.3;
  const double b = 2.0;

  const std::vector<RowSpec> rows = {
      {"bm|dirac", "BM(mu) absorbed at t_star -> bridge drift", BmDrift{mu_neg},
       DiracTime{t_star}, [&](double x, double t) { return tr::bridge(a, t_star, x, t); }},
      {"bm(mu>=0)|forever", "BM(mu >= 0) forever survival -> taboo(a)", BmDrift{mu_pos},
       ForeverSurvival{}, [&](double x, double) { return tr::taboo_at(a, x); }},
      {"bm(mu<0)|forever", "BM(mu < 0) forever survival -> -mu coth(mu(a-x))", BmDrift{mu_neg},
       ForeverSurvival{}, [&](double x, double) { return tr::bm_neg_forever(mu_neg, a, x); }},
      {"tanh|dirac", "tanh(alpha,beta) absorbed at t_star -> bridge drift",
       TanhDrift{alpha, beta}, DiracTime{t_star},
       [&](double x, double t) { return tr::bridge(a, t_star, x, t); }},
      {"tanh|forever", "tanh(alpha,beta) forever survival -> -alpha coth(alpha(a-x))",
       TanhDrift{alpha, beta}, ForeverSurvival{},
       [&](double x, double) { return tr::tanh_forever(alpha, a, x); }},
      {"taboo|dirac", "taboo(b) absorbed at t_star -> bridge drift", Taboo{b}, DiracTime{t_star},
       [&](double x, double t) { return tr::bridge(a, t_star, x, t); }},
      {"taboo|forever", "taboo(b) forever survival -> taboo(a)", Taboo{b}, ForeverSurvival{},
       [&](double x, double) { return tr::taboo_at(a, x); }},
      {"tanh|fpt-bm(mu>=0)", "tanh(alpha,beta) on BM(mu >= 0) FPT -> BM(mu)",
       TanhDrift{alpha, beta}, FptOfBM{mu_pos}, [&](double, double) { return mu_pos; }},
      {"tanh|fpt-bm(mu<0)", "tanh(alpha,beta) on BM(mu < 0) FPT -> type-II drift",
       TanhDrift{alpha, beta}, FptOfBM{mu_neg},
       [&](double x, double t) { return tr::tanh_on_bm_neg(alpha, mu_neg, a, x, t); }},
      {"tanh|fpt-tanh(gamma,delta)", "tanh(alpha,beta) on tanh(gamma,delta) FPT",
       TanhDrift{alpha, beta}, FptOfTanh{gamma, delta},
       [&](double x, double t) { return tr::tanh_on_tanh(alpha, gamma, delta, a, x, t); }},
      {"tanh|fpt-tanh(alpha,delta)", "tanh(alpha,beta) on tanh(alpha,delta) FPT -> tanh(alpha,delta)",
       TanhDrift{alpha, beta}, FptOfTanh{alpha, delta},
       [&](double x, double) { return tr::tanh_same_alpha(alpha, delta, x); }},
      {"bm(mu>=0)|fpt-tanh", "BM(mu >= 0) on tanh(alpha,beta) FPT", BmDrift{mu_pos},
       FptOfTanh{alpha, beta},
       [&](double x, double t) { return tr::bm_pos_on_tanh(alpha, beta, a, x, t); }},
      {"bm(mu>=0)|fpt-taboo", "BM(mu >= 0) on taboo(b) FPT -> taboo(b)", BmDrift{mu_pos},
       FptOfTaboo{b}, [&](double x, double) { return tr::taboo_at(b, x); }},
      {"bm(mu<0)|fpt-tanh", "BM(mu < 0) on tanh(alpha,beta) FPT", BmDrift{mu_neg},
       FptOfTanh{alpha, beta},
       [&](double x, double t) { return tr::bm_neg_on_tanh(mu_neg, alpha, beta, a, x, t); }},
      {"bm(mu<0)|fpt-taboo", "BM(mu < 0) on taboo(b) FPT", BmDrift{mu_neg}, FptOfTaboo{b},
       [&](double x, double t) { return tr::bm_neg_on_taboo(mu_neg, b, a, x, t); }},
      {"taboo|fpt-bm(mu>=0)", "taboo(b) on BM(mu >= 0) FPT -> BM(mu)", Taboo{b}, FptOfBM{mu_pos},
       [&](double, double) { return mu_pos; }},
      {"taboo|fpt-bm(mu<0)", "taboo(b) on BM(mu < 0) FPT", Taboo{b}, FptOfBM{mu_neg},
       [&](double x, double t) { return tr::taboo_on_bm_neg(mu_neg, a, x, t); }},
  };

  std::vector<TableRow> out;
  for (const auto& row : rows) {
    const auto drift = make_conditioned_drift(row.source, setup, row.scheme);
    double worst = 0.0;
    for (double x : grid.xs) {
      for (double t : grid.ts) {
        const double dev = std::abs(drift(x, t) - row.transcription(x, t));
        worst = std::isnan(dev) ? INFINITY : std::max(worst, dev);
      }
    }
    out.push_back({row.id, row.description, worst});
  }
  return out;
}

}  // namespace fptlab::verify
