#pragma once

#include <string>
#include <variant>

namespace fptlab {

/// Brownian motion with constant drift mu.
struct BmDrift {
  double mu = 0.0;
};

/// Benes (tanh-drift) process, drift alpha * tanh(alpha * x + beta), alpha > 0.
struct TanhDrift {
  double alpha = 1.0;
  double beta = 0.0;
};

/// Taboo process with taboo state b, drift -1 / (b - x) on (-inf, b).
struct Taboo {
  double b = 1.0;
};

using DriftModel = std::variant<BmDrift, TanhDrift, Taboo>;

/// Absorbing level and start point of a first-passage problem.
struct BarrierSetup {
  double a = 1.0;
  double x0 = 0.0;
  double t0 = 0.0;
};

struct SpaceTimePoint {
  double x = 0.0;
  double t = 0.0;
};

// Throws ValidationError on alpha <= 0, non-finite parameters, x0 >= a, or
// b <= a for taboo models.
void validate(const DriftModel& model);
void validate(const DriftModel& model, const BarrierSetup& setup);

std::string describe(const DriftModel& model);

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace fptlab
