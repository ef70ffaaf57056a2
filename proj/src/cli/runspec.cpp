#include <cmath>
#include <string>

#include "fptlab/cli.hpp"
#include "fptlab/errors.hpp"

namespace fptlab::cli {

using nlohmann::json;

namespace {

const char* command_name(Command c) {
  switch (c) {
    case Command::Eval: return "eval";
    case Command::Simulate: return "simulate";
    case Command::Verify: return "verify";
    case Command::TableCheck: return "table-check";
    case Command::Fig1: return "fig1";
    case Command::Reciprocity: return "reciprocity";
  }
  return "?";
}

Command parse_command(const std::string& s) {
  for (auto c : {Command::Eval, Command::Simulate, Command::Verify, Command::TableCheck,
                 Command::Fig1, Command::Reciprocity}) {
    if (s == command_name(c)) return c;
  }
  throw ValidationError("unknown command '" + s + "'");
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad value for '") + key + "': " + e.what());
  }
}

bool needs_sim(Command c) { return c == Command::Simulate || c == Command::Verify; }

}  // namespace

RunSpec runspec_from_json(const json& j) {
  RunSpec s;
  s.command = parse_command(get_or<std::string>(j, "command", "eval"));

  const std::string model = get_or<std::string>(j, "model", "bm");
  const double mu = get_or(j, "mu", 0.0);
  const double alpha = get_or(j, "alpha", 1.0);
  const double beta = get_or(j, "beta", 0.0);
  const double b = get_or(j, "b", 2.0);
  if (model == "bm") {
    s.model = BmDrift{mu};
  } else if (model == "tanh") {
    s.model = TanhDrift{alpha, beta};
  } else if (model == "taboo") {
    s.model = Taboo{b};
  } else {
    throw ValidationError("unknown model '" + model + "' (expected bm, tanh or taboo)");
  }

  s.setup = BarrierSetup{get_or(j, "a", 1.0), get_or(j, "x0", 0.0), get_or(j, "t0", 0.0)};

  const std::string scheme = get_or<std::string>(j, "scheme", "none");
  if (scheme == "dirac") {
    if (!j.contains("Tstar")) throw ValidationError("scheme dirac requires --Tstar");
    s.scheme = DiracTime{get_or(j, "Tstar", 1.0)};
  } else if (scheme == "forever") {
    s.scheme = ForeverSurvival{};
  } else if (scheme == "fpt-bm") {
    s.scheme = FptOfBM{mu};
  } else if (scheme == "fpt-tanh") {
    s.scheme = FptOfTanh{get_or(j, "gamma", 1.0), get_or(j, "delta", 0.0)};
  } else if (scheme == "fpt-taboo") {
    s.scheme = FptOfTaboo{b};
  } else if (scheme != "none") {
    throw ValidationError("unknown scheme '" + scheme +
                          "' (expected none, dirac, forever, fpt-bm, fpt-tanh, fpt-taboo)");
  }

  if (needs_sim(s.command) || j.contains("dt") || j.contains("horizon") || j.contains("paths")) {
    sim::SimConfig cfg;
    cfg.dt = get_or(j, "dt", 1e-3);
    cfg.horizon = get_or(j, "horizon", 10.0);
    cfg.n_paths = get_or<std::size_t>(j, "paths", 10000);
    cfg.seed = get_or<std::uint64_t>(j, "seed", 1);
    cfg.bridge_correction = get_or(j, "bridge_correction", true);
    s.sim = cfg;
  }

  s.output_path = get_or<std::string>(j, "out", "");
  s.format = get_or<std::string>(j, "format", "csv");
  if (s.format != "csv" && s.format != "json")
    throw ValidationError("format must be csv or json");
  s.quantity = get_or<std::string>(j, "quantity", "drift");
  s.T = get_or(j, "T", 1.0);
  s.times = get_or(j, "t", std::vector<double>{s.T});
  s.x_min = get_or(j, "x_min", -2.0);
  s.x_max = get_or(j, "x_max", s.setup.a);
  s.nx = get_or(j, "nx", 31);
  s.nt = get_or(j, "nt", 20);
  if (s.nx < 1 || s.nt < 1) throw ValidationError("nx and nt must be positive");
  if (s.command == Command::Reciprocity) {
    s.mu = get_or(j, "mu", 0.3);
    s.b = b;
    s.alpha = alpha;
    s.beta = beta;
    s.delta = get_or(j, "delta", 0.5);
  }
  return s;
}

json to_json(const RunSpec& s) {
  json j;
  j["command"] = command_name(s.command);
  std::visit(overloaded{
                 [&](const BmDrift& m) {
                   j["model"] = "bm";
                   j["mu"] = m.mu;
                 },
                 [&](const TanhDrift& m) {
                   j["model"] = "tanh";
                   j["alpha"] = m.alpha;
                   j["beta"] = m.beta;
                 },
                 [&](const Taboo& m) {
                   j["model"] = "taboo";
                   j["b"] = m.b;
                 },
             },
             s.model);
  j["scheme"] = "none";
  if (s.scheme) {
    std::visit(overloaded{
                   [&](const DiracTime& c) {
                     j["scheme"] = "dirac";
                     j["Tstar"] = c.t_star;
                   },
                   [&](const ForeverSurvival&) { j["scheme"] = "forever"; },
                   [&](const FptOfBM& c) {
                     j["scheme"] = "fpt-bm";
                     j["mu"] = c.mu;
                   },
                   [&](const FptOfTanh& c) {
                     j["scheme"] = "fpt-tanh";
                     j["gamma"] = c.gamma;
                     j["delta"] = c.delta;
                   },
                   [&](const FptOfTaboo& c) {
                     j["scheme"] = "fpt-taboo";
                     j["b"] = c.b;
                   },
                   [&](const FiniteHorizon&) { j["scheme"] = "finite-horizon"; },
               },
               *s.scheme);
  }
  j["a"] = s.setup.a;
  j["x0"] = s.setup.x0;
  j["t0"] = s.setup.t0;
  if (s.sim) {
    j["dt"] = s.sim->dt;
    j["horizon"] = s.sim->horizon;
    j["paths"] = s.sim->n_paths;
    j["seed"] = s.sim->seed;
    j["bridge_correction"] = s.sim->bridge_correction;
  }
  j["out"] = s.output_path;
  j["format"] = s.format;
  j["quantity"] = s.quantity;
  j["T"] = s.T;
  j["t"] = s.times;
  j["x_min"] = s.x_min;
  j["x_max"] = s.x_max;
  j["nx"] = s.nx;
  j["nt"] = s.nt;
  if (s.command == Command::Reciprocity) {
    j["mu"] = s.mu;
    j["b"] = s.b;
    j["alpha"] = s.alpha;
    j["beta"] = s.beta;
    j["delta"] = s.delta;
  }
  return j;
}

}  // namespace fptlab::cli
