#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "fptlab/analytics.hpp"
#include "fptlab/cli.hpp"
#include "fptlab/errors.hpp"
#include "fptlab/verify.hpp"

namespace fptlab::cli {

using nlohmann::json;

namespace {

// Rows of a headered table, rendered as CSV (17 significant digits) or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string render_cell(const json& v) {
  if (v.is_number_float()) {
    std::ostringstream s;
    s << std::setprecision(17) << v.get<double>();
    return s.str();
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void emit(const RunSpec& spec, const Table& table, const json& extra, std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!spec.output_path.empty()) {
    file.open(spec.output_path);
    if (!file) throw ValidationError("cannot open output file " + spec.output_path);
    os = &file;
  }
  if (spec.format == "json") {
    json doc = extra;
    doc["runspec"] = to_json(spec);
    json rows = json::array();
    for (const auto& r : table.rows) {
      json row;
      for (std::size_t c = 0; c < table.columns.size(); ++c) row[table.columns[c]] = r[c];
      rows.push_back(row);
    }
    doc["rows"] = rows;
    *os << doc.dump(2) << "\n";
    return;
  }
  *os << "# runspec: " << to_json(spec).dump() << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) *os << (c ? "," : "") << table.columns[c];
  *os << "\n";
  for (const auto& r : table.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) *os << (c ? "," : "") << render_cell(r[c]);
    *os << "\n";
  }
}

void emit_json(const RunSpec& spec, json doc, std::ostream& out) {
  doc["runspec"] = to_json(spec);
  if (spec.output_path.empty()) {
    out << doc.dump(2) << "\n";
    return;
  }
  std::ofstream file(spec.output_path);
  if (!file) throw ValidationError("cannot open output file " + spec.output_path);
  file << doc.dump(2) << "\n";
}

std::vector<double> x_grid(const RunSpec& s) {
  std::vector<double> xs;
  for (int i = 0; i < s.nx; ++i) xs.push_back(s.x_min + (s.x_max - s.x_min) * i / s.nx);
  return xs;
}

int run_eval(const RunSpec& s, std::ostream& out) {
  Table table{{"x", "t", "value"}, {}};
  const auto& q = s.quantity;
  if (q == "drift" || q == "q") {
    std::function<double(double, double)> f;
    if (q == "q") {
      if (!s.scheme) throw ValidationError("quantity q requires --scheme");
      f = make_q_function(s.model, s.setup, *s.scheme).evaluator;
    } else if (s.scheme) {
      f = make_conditioned_drift(s.model, s.setup, *s.scheme).evaluator;
    } else {
      validate(s.model);
      f = [&](double x, double t) { return analytics::drift_value(s.model, {x, t}); };
    }
    for (double t : s.times)
      for (double x : x_grid(s)) table.rows.push_back({x, t, f(x, t)});
  } else if (q == "propagator" || q == "absorbed") {
    if (s.scheme) throw ValidationError("quantity " + q + " takes no --scheme");
    validate(s.model, s.setup);
    const SpaceTimePoint from{s.setup.x0, s.setup.t0};
    for (double x : x_grid(s)) {
      const SpaceTimePoint to{x, s.T};
      const double v = q == "propagator" ? analytics::propagator_free(s.model, from, to)
                                         : analytics::propagator_absorbed(s.model, s.setup, from, to);
      table.rows.push_back({x, s.T, v});
    }
  } else if (q == "fpt" || q == "survival") {
    if (s.scheme) throw ValidationError("quantity " + q + " takes no --scheme");
    validate(s.model, s.setup);
    for (int i = 1; i <= s.nt; ++i) {
      const double t = s.setup.t0 + (s.T - s.setup.t0) * i / s.nt;
      const double v = q == "fpt" ? analytics::fpt_density(s.model, s.setup, t)
                                  : analytics::survival_to_T(s.model, s.setup, t);
      table.rows.push_back({s.setup.x0, t, v});
    }
  } else {
    throw ValidationError("unknown quantity '" + q +
                          "' (expected drift, q, propagator, absorbed, fpt, survival)");
  }
  emit(s, table, json::object(), out);
  return kExitOk;
}

sim::PathEnsemble simulate(const RunSpec& s) {
  const auto field = s.scheme ? sim::drift_field(make_conditioned_drift(s.model, s.setup, *s.scheme))
                              : sim::drift_field(s.model);
  if (!s.scheme) validate(s.model, s.setup);
  return sim::simulate_ensemble(field, s.setup, *s.sim);
}

json ensemble_summary(const sim::PathEnsemble& ens) {
  const auto times = ens.absorbed_times();
  double mean = 0.0;
  for (double t : times) mean += t;
  if (!times.empty()) mean /= static_cast<double>(times.size());
  return json{{"model_label", ens.model_label},
              {"n_paths", ens.outcomes.size()},
              {"n_absorbed", times.size()},
              {"n_diverged", ens.n_diverged},
              {"absorbed_fraction", ens.absorbed_fraction()},
              {"mean_absorption_time", mean}};
}

int run_simulate(const RunSpec& s, std::ostream& out) {
  const auto ens = simulate(s);
  emit_json(s, ensemble_summary(ens), out);
  if (!s.output_path.empty()) {
    std::filesystem::path samples(s.output_path);
    samples.replace_filename(samples.stem().string() + "_fpt.csv");
    std::ofstream file(samples);
    file << "# runspec: " << to_json(s).dump() << "\n" << "path,tau\n" << std::setprecision(17);
    for (std::size_t i = 0; i < ens.outcomes.size(); ++i) {
      if (ens.outcomes[i].status == sim::PathStatus::Absorbed)
        file << i << "," << ens.outcomes[i].tau << "\n";
    }
  }
  return kExitOk;
}

int run_verify(const RunSpec& s, std::ostream& out) {
  const auto ens = simulate(s);
  json doc = ensemble_summary(ens);
  bool pass = false;
  std::optional<DriftModel> reference;
  if (!s.scheme) {
    reference = s.model;
  } else {
    std::visit(overloaded{
                   [&](const DiracTime& d) {
                     const auto r = verify::dirac_time_check(ens, d.t_star);
                     doc["dirac"] = {{"t_star", r.t_star},
                                     {"absorbed_fraction", r.absorbed_fraction},
                                     {"mean_tau", r.mean_tau},
                                     {"sd_tau", r.sd_tau}};
                     pass = r.pass;
                   },
                   [&](const ForeverSurvival&) { pass = ens.n_absorbed() == 0; },
                   [&](const FptOfBM& c) { reference = BmDrift{c.mu}; },
                   [&](const FptOfTanh& c) { reference = TanhDrift{c.gamma, c.delta}; },
                   [&](const FptOfTaboo& c) { reference = Taboo{c.b}; },
                   [&](const FiniteHorizon&) {
                     throw ValidationError("finite-horizon targets are not available from the CLI");
                   },
               },
               *s.scheme);
  }
  if (reference) {
    const auto r = verify::ks_against_fpt(ens, *reference, s.setup);
    doc["report"] = {{"reference", r.reference},
                     {"ks_distance", r.ks_distance},
                     {"n_absorbed", r.n_absorbed},
                     {"absorbed_fraction", r.absorbed_fraction},
                     {"analytic_absorption", r.analytic_absorption},
                     {"survival_curve_max_dev", r.survival_curve_max_dev},
                     {"tolerances",
                      {{"ks", r.tolerances.ks},
                       {"absorption", r.tolerances.absorption},
                       {"survival", r.tolerances.survival}}}};
    pass = r.pass;
  }
  doc["pass"] = pass;
  emit_json(s, doc, out);
  return pass ? kExitOk : kExitVerificationFailed;
}

int run_table_check(const RunSpec& s, std::ostream& out) {
  constexpr double kTolerance = 1e-10;
  Table table{{"id", "description", "max_deviation", "pass"}, {}};
  bool pass = true;
  for (const auto& row : verify::table_identity_sweep()) {
    const bool ok = row.max_deviation <= kTolerance;
    pass = pass && ok;
    table.rows.push_back({row.id, row.description, row.max_deviation, ok});
  }
  emit(s, table, json{{"tolerance", kTolerance}, {"pass", pass}}, out);
  return pass ? kExitOk : kExitVerificationFailed;
}

int run_fig1(const RunSpec& s, std::ostream& out) {
  constexpr double a = 5.0;
  constexpr double mu = -1.0;
  constexpr double alpha = 1.0;
  constexpr double beta = 0.0;
  constexpr int n = 1000;
  const BarrierSetup setup{a, 0.0, 0.0};
  const auto drift = make_conditioned_drift(BmDrift{mu}, setup, FptOfTanh{alpha, beta});
  Table table{{"x", "tanh_drift", "conditioned_drift"}, {}};
  for (int i = 0; i < n; ++i) {
    const double x = -5.0 + 10.0 * i / n;
    // alpha = -mu makes the conditioned drift time-independent; t = 1 is arbitrary.
    table.rows.push_back({x, analytics::drift_value(TanhDrift{alpha, beta}, {x, 0.0}), drift(x, 1.0)});
  }
  emit(s, table, json::object(), out);
  return kExitOk;
}

std::vector<SpaceTimePoint> reciprocity_grid(const BarrierSetup& setup) {
  std::vector<SpaceTimePoint> grid;
  const double span = setup.a - setup.x0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      grid.push_back({setup.x0 - 2.0 * span + 2.95 * span * i / 19.0,
                      setup.t0 + 0.05 + 4.95 * j / 19.0});
    }
  }
  return grid;
}

int run_reciprocity(const RunSpec& s, std::ostream& out) {
  constexpr double kTolerance = 1e-12;
  const auto grid = reciprocity_grid(s.setup);
  const double bm_taboo = conditioning::reciprocity_check(
      make_q_function(BmDrift{s.mu}, s.setup, FptOfTaboo{s.b}),
      make_q_function(Taboo{s.b}, s.setup, FptOfBM{s.mu}), grid);
  const double tanh_cycle = conditioning::reciprocity_check(
      make_q_function(TanhDrift{s.alpha, s.beta}, s.setup, FptOfTanh{s.alpha, s.delta}),
      make_q_function(TanhDrift{s.alpha, s.delta}, s.setup, FptOfTanh{s.alpha, s.beta}), grid);
  const bool pass = bm_taboo <= kTolerance;
  Table table{{"pair", "max_deviation", "asserted"}, {}};
  table.rows.push_back({"bm(mu)<->taboo(b)", bm_taboo, true});
  table.rows.push_back({"tanh(alpha,beta)<->tanh(alpha,delta)", tanh_cycle, false});
  emit(s, table, json{{"tolerance", kTolerance}, {"pass", pass}}, out);
  return pass ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    switch (spec.command) {
      case Command::Eval: return run_eval(spec, out);
      case Command::Simulate: return run_simulate(spec, out);
      case Command::Verify: return run_verify(spec, out);
      case Command::TableCheck: return run_table_check(spec, out);
      case Command::Fig1: return run_fig1(spec, out);
      case Command::Reciprocity: return run_reciprocity(spec, out);
    }
  } catch (const ValidationError& e) {
    err << "invalid run: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const DispatchError& e) {
    err << "invalid run: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const DomainError& e) {
    err << "invalid run: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << "\n";
    return kExitVerificationFailed;
  }
  return kExitInvalid;
}

int main(int argc, char** argv) {
  CLI::App app{"First-passage analytics, conditioned drifts and Monte Carlo verification"};
  std::string command;
  std::string config;
  app.add_option("command", command, "eval | simulate | verify | table-check | fig1 | reciprocity")
      ->required();
  app.add_option("--config", config, "JSON run file; flags override its values");

  json flags;
  std::map<std::string, std::optional<double>> reals;
  for (const char* name : {"alpha", "beta", "mu", "b", "gamma", "delta", "a", "x0", "t0", "T",
                           "Tstar", "dt", "horizon", "x-min", "x-max"}) {
    app.add_option(std::string("--") + name, reals[name]);
  }
  std::map<std::string, std::optional<std::string>> strings;
  for (const char* name : {"model", "out", "format", "scheme", "quantity"}) {
    app.add_option(std::string("--") + name, strings[name]);
  }
  std::optional<std::size_t> paths;
  std::optional<std::uint64_t> seed;
  std::optional<int> nx;
  std::optional<int> nt;
  std::vector<double> times;
  bool no_bridge = false;
  app.add_option("--paths", paths);
  app.add_option("--seed", seed);
  app.add_option("--nx", nx);
  app.add_option("--nt", nt);
  app.add_option("--t", times, "evaluation times of drift rows");
  app.add_flag("--no-bridge", no_bridge, "disable the within-step crossing test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    json merged = json::object();
    if (!config.empty()) {
      std::ifstream in(config);
      if (!in) throw ValidationError("cannot read config file " + config);
      merged = json::parse(in);
      if (!merged.is_object()) throw ValidationError("config file must hold a JSON object");
    }
    merged["command"] = command;
    for (const auto& [name, v] : reals) {
      std::string key = name;
      std::replace(key.begin(), key.end(), '-', '_');
      if (v) merged[key] = *v;
    }
    for (const auto& [name, v] : strings)
      if (v) merged[name] = *v;
    if (paths) merged["paths"] = *paths;
    if (seed) merged["seed"] = *seed;
    if (nx) merged["nx"] = *nx;
    if (nt) merged["nt"] = *nt;
    if (!times.empty()) merged["t"] = times;
    if (no_bridge) merged["bridge_correction"] = false;
    return run(runspec_from_json(merged), std::cout, std::cerr);
  } catch (const json::exception& e) {
    std::cerr << "invalid run: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ValidationError& e) {
    std::cerr << "invalid run: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace fptlab::cli
