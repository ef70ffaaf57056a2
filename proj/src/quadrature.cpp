#include "fptlab/quadrature.hpp"

#include <sstream>

#include "fptlab/errors.hpp"

namespace fptlab::quadrature {

void report_nonconvergence(double value, double error, double lo, double hi) {
  std::ostringstream msg;
  msg.precision(6);
  msg << "quadrature over [" << lo << ", " << hi << "] did not converge: value " << value
      << ", error estimate " << error;
  throw QuadratureError(msg.str(), value, error);
}

}  // namespace fptlab::quadrature
