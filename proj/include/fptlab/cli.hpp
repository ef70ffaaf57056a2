#pragma once

// Command-line front end. A RunSpec is built from flags layered over an
// optional JSON run file; every artifact embeds the RunSpec it came from.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fptlab/conditioning.hpp"
#include "fptlab/sim.hpp"
#include "fptlab/types.hpp"

namespace fptlab::cli {

enum class Command { Eval, Simulate, Verify, TableCheck, Fig1, Reciprocity };

/// Exit codes; the only pass/fail contract for scripted use.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitInvalid = 2;

struct RunSpec {
  Command command = Command::Eval;
  DriftModel model = BmDrift{};
  std::optional<ConditioningScheme> scheme;
  BarrierSetup setup;
  std::optional<sim::SimConfig> sim;
  std::string output_path;  // empty: standard output
  std::string format = "csv";

  // eval: quantity in {drift, propagator, absorbed, fpt, survival}
  std::string quantity = "drift";
  double T = 1.0;  // end time of propagators, last time of fpt / survival rows
  std::vector<double> times{1.0};  // evaluation times of drift rows
  double x_min = -2.0;
  double x_max = 1.0;
  int nx = 31;
  int nt = 20;

  // reciprocity: parameters of the BM(mu) <-> taboo(b) and
  // tanh(alpha, beta) <-> tanh(alpha, delta) pairs
  double mu = 0.3;
  double b = 2.0;
  double alpha = 1.0;
  double beta = 0.0;
  double delta = 0.5;
};

/// Keys match the long flag names without dashes. Missing keys take the
/// RunSpec defaults. Throws ValidationError on unknown values or missing
/// command-specific fields.
RunSpec runspec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunSpec& spec);

int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// Parses argv (flags override --config file values) and runs.
int main(int argc, char** argv);

}  // namespace fptlab::cli
