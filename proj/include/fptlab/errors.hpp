#pragma once

#include <stdexcept>
#include <string>

namespace fptlab {

// Argument outside the domain of a closed form (x >= a, x >= b, t <= t0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// (source, scheme) pair with no implemented branch.
class DispatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed configuration or target law, detected at construction time.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double value, double error_estimate)
      : std::runtime_error(what), value_(value), error_estimate_(error_estimate) {}

  double value() const noexcept { return value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double value_;
  double error_estimate_;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fptlab
