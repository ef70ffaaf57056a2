#pragma once

// Direct transcriptions of the published conditioned-drift formulas, written
// with plain exp/sinh/cosh and start (0, 0). They are kept deliberately
// naive: they serve as the independent side of the identity sweep and must
// not share code with the conditioning module.

namespace fptlab::transcribed {

double bridge(double a, double t_star, double x, double t);
double taboo_at(double level, double x);
double bm_neg_forever(double mu, double a, double x);
double tanh_forever(double alpha, double a, double x);
double tanh_on_bm_neg(double alpha, double mu, double a, double x, double t);
double tanh_on_tanh(double alpha, double gamma, double delta, double a, double x, double t);
double tanh_same_alpha(double alpha, double delta, double x);
double bm_pos_on_tanh(double alpha, double beta, double a, double x, double t);
double bm_neg_on_tanh(double mu, double alpha, double beta, double a, double x, double t);
double bm_neg_on_taboo(double mu, double b, double a, double x, double t);
double taboo_on_bm_neg(double mu, double a, double x, double t);

/// Time-independent simplification printed for alpha = -mu, beta = 0.
double bm_neg_on_tanh_matched(double mu, double a, double x);

}  // namespace fptlab::transcribed
