#include <cmath>

#include "fptlab/transcriptions.hpp"

namespace fptlab::transcribed {

using std::cosh;
using std::exp;
using std::sinh;

double bridge(double a, double t_star, double x, double t) {
  return -1.0 / (a - x) + (a - x) / (t_star - t);
}

double taboo_at(double level, double x) { return -1.0 / (level - x); }

double bm_neg_forever(double mu, double a, double x) { return -mu / std::tanh(mu * (a - x)); }

double tanh_forever(double alpha, double a, double x) {
  return -alpha / std::tanh(alpha * (a - x));
}

double tanh_on_bm_neg(double alpha, double mu, double a, double x, double t) {
  const double E = exp(2 * a * mu - mu * x - alpha * x + 0.5 * (alpha * alpha - mu * mu) * t);
  const double R = (1 - exp(2 * a * mu)) / (1 - exp(2 * a * alpha));
  const double num = -(mu + alpha) * E + 2 * alpha * R * exp(2 * alpha * (a - x));
  const double den = E + R * (1 - exp(2 * alpha * (a - x)));
  return alpha + num / den;
}

double tanh_on_tanh(double alpha, double gamma, double delta, double a, double x, double t) {
  const double g = (exp(2 * (a * gamma + delta)) + 1) *
                   exp(0.5 * (alpha * alpha - gamma * gamma) * t + gamma * x);
  const double k = (exp(2 * a * gamma) - 1) * exp(alpha * x) / (exp(2 * a * alpha) - 1);
  const double num = gamma * g - alpha * k * (exp(2 * alpha * (a - x)) + 1);
  const double den = g + k * (exp(2 * alpha * (a - x)) - 1);
  return num / den;
}

double tanh_same_alpha(double alpha, double delta, double x) {
  return alpha * std::tanh(alpha * x + delta);
}

double bm_pos_on_tanh(double alpha, double beta, double a, double x, double t) {
  const double c = exp(alpha * x + beta) * cosh(a * alpha + beta);
  const double s = sinh(a * alpha) * exp(alpha * alpha * t / 2);
  return (a * alpha * c - s) / (a * c + s * (a - x));
}

double bm_neg_on_tanh(double mu, double alpha, double beta, double a, double x, double t) {
  const double P = 2 * a * exp(a * alpha + beta) * cosh(a * alpha + beta) *
                   exp(-0.5 * (alpha * alpha - mu * mu) * t) * exp(alpha * x) / (a - x);
  const double r = 2 * exp(a * alpha) * sinh(a * alpha) / sinh(a * mu);
  const double num = P * (alpha + 1 / (a - x)) - mu * r * cosh(mu * (a - x));
  const double den = P + r * sinh(mu * (a - x));
  return num / den;
}

double bm_neg_on_taboo(double mu, double b, double a, double x, double t) {
  const double E = (b - a) * exp(mu * mu * t / 2 - mu * x);
  const double q = 1 - exp(2 * a * mu);
  const double num = -mu * E + 2 * a * mu * exp(2 * mu * (a - x)) / q;
  const double den = E + a * (1 - exp(2 * mu * (a - x))) / q;
  return mu + num / den;
}

double taboo_on_bm_neg(double mu, double a, double x, double t) {
  const double s = 2 * sinh(a * mu) * exp(mu * mu * t / 2 + mu * (x - a));
  return (s - a * mu) / (a - (a - x) * s);
}

double bm_neg_on_tanh_matched(double mu, double a, double x) {
  const double num = a + a * mu * (x - a) + mu * (a - x) * (a - x) * exp(2 * mu * x) +
                     (a + mu * x * x - a * mu * x) * exp(2 * a * mu);
  const double den = (a - x) * (a + (a - x) * exp(2 * mu * x) + x * exp(2 * a * mu));
  return num / den;
}

}  // namespace fptlab::transcribed
