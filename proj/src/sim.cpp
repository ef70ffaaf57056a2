#include "fptlab/sim.hpp"

#include <algorithm>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "fptlab/analytics.hpp"
#include "fptlab/errors.hpp"

namespace fptlab::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 path_generator(std::uint64_t seed, std::size_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 1)));
}

// Below this exponent the bridge crossing probability is under 5e-18 and no
// uniform is drawn.
constexpr double kBridgeCutoff = -40.0;

// Runs body(i) for every index, spread over worker_count threads.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers = worker_count(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::size_t step_count(double span, double dt) {
  return static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
}

}  // namespace

std::size_t worker_count(std::size_t n_tasks) {
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FPTLAB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) workers = std::min(workers, static_cast<std::size_t>(cap));
  }
  return std::max<std::size_t>(1, std::min(workers, n_tasks));
}

void validate(const SimConfig& cfg, const BarrierSetup& setup) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ValidationError("dt must be positive");
  if (!(cfg.horizon > setup.t0)) throw ValidationError("horizon must exceed t0");
  if (!(cfg.dt < cfg.horizon - setup.t0)) throw ValidationError("dt must be below the horizon");
  if (cfg.n_paths < 1) throw ValidationError("n_paths must be at least 1");
  if (!(cfg.boundary_guard > 0.0)) throw ValidationError("boundary_guard must be positive");
}

std::size_t PathEnsemble::n_absorbed() const {
  return static_cast<std::size_t>(std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) {
    return o.status == PathStatus::Absorbed;
  }));
}

double PathEnsemble::absorbed_fraction() const {
  const std::size_t valid = outcomes.size() - n_diverged;
  return valid == 0 ? 0.0 : static_cast<double>(n_absorbed()) / static_cast<double>(valid);
}

double PathEnsemble::alive_fraction(double t) const {
  std::size_t valid = 0;
  std::size_t alive = 0;
  for (const auto& o : outcomes) {
    if (o.status == PathStatus::Diverged) continue;
    ++valid;
    if (o.status == PathStatus::Survived || o.tau > t) ++alive;
  }
  return valid == 0 ? 0.0 : static_cast<double>(alive) / static_cast<double>(valid);
}

std::vector<double> PathEnsemble::absorbed_times() const {
  std::vector<double> out;
  for (const auto& o : outcomes)
    if (o.status == PathStatus::Absorbed) out.push_back(o.tau);
  return out;
}

DriftField drift_field(const DriftModel& model) {
  validate(model);
  DriftField out;
  out.label = describe(model);
  std::visit(overloaded{
                 [&](const BmDrift& m) {
                   out.f = [mu = m.mu](double, double) { return mu; };
                 },
                 [&](const TanhDrift& m) {
                   out.f = [al = m.alpha, be = m.beta](double x, double) {
                     return al * std::tanh(al * x + be);
                   };
                 },
                 [&](const Taboo& m) {
                   out.f = [b = m.b](double x, double) { return -1.0 / (b - x); };
                   out.singular_level = m.b;
                 },
             },
             model);
  return out;
}

DriftField drift_field(const ConditionedDrift& drift) {
  DriftField out;
  out.f = drift.evaluator;
  out.singular_level = drift.singular_level;
  out.terminal_time = drift.terminal_time;
  out.label = describe(drift.source) + " | " + describe(drift.scheme) + " [" + drift.label + "]";
  return out;
}

PathEnsemble simulate_ensemble(const DriftField& drift, const BarrierSetup& setup,
                               const SimConfig& cfg) {
  validate(cfg, setup);
  if (!(setup.x0 < setup.a)) throw ValidationError("start x0 must lie below the barrier a");
  if (drift.terminal_time && !(*drift.terminal_time > setup.t0 + cfg.dt &&
                               *drift.terminal_time <= cfg.horizon))
    throw ValidationError("terminal time must lie within (t0 + dt, horizon]");

  PathEnsemble ens;
  ens.config = cfg;
  ens.setup = setup;
  ens.model_label = drift.label;
  ens.outcomes.resize(cfg.n_paths);

  const double a = setup.a;
  const double dt = cfg.dt;
  const double sqrt_dt = std::sqrt(dt);
  const bool absorbing = !(drift.singular_level && *drift.singular_level == a);
  const bool clamp = drift.singular_level.has_value();
  const double clamp_level = clamp ? *drift.singular_level - cfg.boundary_guard : 0.0;
  // A terminal time ends stepping one step early: the last drift evaluation
  // happens at terminal_time - 2 dt.
  const std::size_t n_steps =
      drift.terminal_time ? step_count(*drift.terminal_time - dt - setup.t0, dt)
                          : step_count(cfg.horizon - setup.t0, dt);
  const auto& f = drift.f;

  std::mutex diag_mutex;
  std::size_t diverged = 0;
  std::string first_diag;

  parallel_for(cfg.n_paths, [&](std::size_t i) {
    auto gen = path_generator(cfg.seed, i);
    boost::random::normal_distribution<double> normal;
    boost::random::uniform_01<double> uniform;
    PathOutcome out;
    double x = setup.x0;
    out.x_max = x;
    std::string diag;
    for (std::size_t k = 0; k < n_steps; ++k) {
      const double t = setup.t0 + static_cast<double>(k) * dt;
      double mu;
      try {
        mu = f(x, t);
      } catch (const std::exception& e) {
        diag = e.what();
        mu = std::nan("");
      }
      if (!std::isfinite(mu)) {
        if (diag.empty()) {
          std::ostringstream msg;
          msg << "non-finite drift at x = " << x << ", t = " << t;
          diag = msg.str();
        }
        out.status = PathStatus::Diverged;
        break;
      }
      double x_new = x + mu * dt + sqrt_dt * normal(gen);
      if (clamp && x_new > clamp_level) x_new = clamp_level;
      ++out.n_steps;
      if (absorbing) {
        bool hit = x_new >= a;
        if (!hit && cfg.bridge_correction) {
          const double e = -2.0 * (a - x) * (a - x_new) / dt;
          hit = e > kBridgeCutoff && uniform(gen) < std::exp(e);
        }
        if (hit) {
          out.status = PathStatus::Absorbed;
          out.tau = t + 0.5 * dt;
          out.x_end = x;
          break;
        }
      }
      x = x_new;
      out.x_max = std::max(out.x_max, x);
    }
    if (out.status == PathStatus::Survived) {
      out.x_end = x;
      if (drift.terminal_time) {
        out.status = PathStatus::Absorbed;
        out.tau = *drift.terminal_time;
      } else {
        out.tau = cfg.horizon;
      }
    }
    if (out.status == PathStatus::Diverged) {
      out.x_end = x;
      out.tau = setup.t0 + static_cast<double>(out.n_steps) * dt;
      std::lock_guard lock(diag_mutex);
      ++diverged;
      if (first_diag.empty()) first_diag = diag;
    }
    ens.outcomes[i] = out;
  });

  ens.n_diverged = diverged;
  ens.first_diagnostic = first_diag;
  if (static_cast<double>(diverged) > 1e-3 * static_cast<double>(cfg.n_paths)) {
    std::ostringstream msg;
    msg << diverged << " of " << cfg.n_paths << " paths diverged (first: " << first_diag << ")";
    throw SimulationError(msg.str());
  }
  return ens;
}

Estimate simulate_reweighted_expectation(const BarrierSetup& base, const DriftModel& weight_model,
                                         const std::function<double(double)>& h, double t,
                                         const SimConfig& cfg) {
  validate(weight_model);
  if (!(t > base.t0)) throw ValidationError("reweighting time must exceed t0");
  if (cfg.n_paths < 2) throw ValidationError("reweighting needs at least two paths");
  const auto* taboo = std::get_if<Taboo>(&weight_model);
  if (taboo && !(base.x0 < taboo->b)) throw ValidationError("taboo reweighting needs x0 < b");

  std::vector<double> samples(cfg.n_paths);
  const double span = t - base.t0;
  const std::size_t n_steps = taboo ? step_count(span, cfg.dt) : 1;
  const double step = span / static_cast<double>(n_steps);
  const double sqrt_step = std::sqrt(step);

  parallel_for(cfg.n_paths, [&](std::size_t i) {
    auto gen = path_generator(cfg.seed, i);
    boost::random::normal_distribution<double> normal;
    boost::random::uniform_01<double> uniform;
    double w = base.x0;
    bool killed = false;
    for (std::size_t k = 0; k < n_steps && !killed; ++k) {
      const double w_new = w + sqrt_step * normal(gen);
      if (taboo) {
        const double b = taboo->b;
        killed = w_new >= b;
        if (!killed && cfg.bridge_correction) {
          const double e = -2.0 * (b - w) * (b - w_new) / step;
          killed = e > kBridgeCutoff && uniform(gen) < std::exp(e);
        }
      }
      w = w_new;
    }
    samples[i] = killed ? 0.0
                        : analytics::girsanov_weight(weight_model, base.x0, w, base.t0, t) * h(w);
  });

  double sum = 0.0;
  for (double s : samples) sum += s;
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n), samples.size()};
}

}  // namespace fptlab::sim
