#include "fptlab/conditioning.hpp"

#include <array>
#include <memory>
#include <cmath>
#include <sstream>

#include "fptlab/analytics.hpp"
#include "fptlab/errors.hpp"
#include "fptlab/numerics.hpp"

namespace fptlab {

namespace nx = numerics;
using nx::LogTerm;

namespace {

// Origin-frame coordinates: X = x - x0, t = t - t0, A = a - x0.
struct Frame {
  double A;
  double X;
  double t;
};

Frame to_frame(const BarrierSetup& setup, SpaceTimePoint p, const char* what) {
  const double gap = setup.a - p.x;
  if (!(gap > conditioning::kGuardBand)) {
    std::ostringstream msg;
    msg << what << ": x = " << p.x << " is not below the barrier a = " << setup.a
        << " by more than the guard band";
    throw DomainError(msg.str());
  }
  if (p.t < setup.t0) throw DomainError(std::string(what) + ": t precedes the start time t0");
  return {setup.a - setup.x0, p.x - setup.x0, p.t - setup.t0};
}

void require_below(double level, double x, const char* what) {
  if (!(level - x > conditioning::kGuardBand)) {
    std::ostringstream msg;
    msg << what << ": x = " << x << " inside the guard band of the singular level " << level;
    throw DomainError(msg.str());
  }
}

// log(1 - e^{2 mu d}) for mu < 0, d > 0.
double log_one_minus_exp2(double mu, double d) { return std::log(-std::expm1(2.0 * mu * d)); }

// log sinh(s) and coth(s) from a single exponential, s > 0.
struct SinhCoth {
  double log_sinh;
  double coth;
};
SinhCoth sinh_coth(double s) {
  const double e = std::exp(-2.0 * s);
  return {s + std::log1p(-e) - nx::kLog2, (1.0 + e) / (1.0 - e)};
}

double two_term_slope(const LogTerm& t1, const LogTerm& t2) {
  const std::array<LogTerm, 2> terms{t1, t2};
  return nx::log_sum_slope(terms);
}
double two_term_log(const LogTerm& t1, const LogTerm& t2) {
  const std::array<LogTerm, 2> terms{t1, t2};
  return nx::log_sum(terms);
}

// ---------------------------------------------------------------------------
// Closed-form branches. Each provides drift(X, t) and log_q(X, t) in the
// origin frame, with parameters already translated.

struct Branch {
  virtual ~Branch() = default;
  virtual double drift(double X, double t) const = 0;
  virtual double log_q(double X, double t) const = 0;
};

// tanh(alpha, beta) on the FPT law of BM(mu >= 0): BM(mu).
struct TanhOnBmPos final : Branch {
  double alpha, beta, mu;
  TanhOnBmPos(double al, double be, double m) : alpha(al), beta(be), mu(m) {}
  double drift(double, double) const override { return mu; }
  double log_q(double X, double t) const override {
    return nx::log_cosh(beta) - nx::log_cosh(alpha * X + beta) +
           0.5 * t * (alpha * alpha - mu * mu) + mu * X;
  }
};

// tanh(alpha, beta) on the FPT law of BM(mu < 0).
struct TanhOnBmNeg final : Branch {
  double alpha, beta, mu, A, c2;
  TanhOnBmNeg(double al, double be, double m, double a)
      : alpha(al), beta(be), mu(m), A(a),
        c2(log_one_minus_exp2(m, a) - nx::log_sinh(al * a)) {}
  std::array<LogTerm, 2> terms(double X, double t) const {
    const auto sc = sinh_coth(alpha * (A - X));
    return {LogTerm{2.0 * A * mu + 0.5 * t * (alpha * alpha - mu * mu) - mu * X, -mu},
            LogTerm{c2 + sc.log_sinh, -alpha * sc.coth}};
  }
  double drift(double X, double t) const override {
    const auto tm = terms(X, t);
    return two_term_slope(tm[0], tm[1]);
  }
  double log_q(double X, double t) const override {
    const auto tm = terms(X, t);
    return nx::log_cosh(beta) - nx::log_cosh(alpha * X + beta) + two_term_log(tm[0], tm[1]);
  }
};

// tanh(alpha, beta) on the FPT law of tanh(gamma, delta).
struct TanhOnTanh final : Branch {
  double alpha, beta, gamma, delta, A, c1, c2, log_pref;
  TanhOnTanh(double al, double be, double g, double d, double a)
      : alpha(al), beta(be), gamma(g), delta(d), A(a),
        c1(nx::log_cosh(a * g + d) + d),
        c2(nx::log_sinh(a * g) - nx::log_sinh(a * al)),
        log_pref(nx::log_cosh(be) - a * g - d - nx::log_cosh(d)) {}
  std::array<LogTerm, 2> terms(double X, double t) const {
    const auto sc = sinh_coth(alpha * (A - X));
    return {LogTerm{c1 + 0.5 * t * (alpha * alpha - gamma * gamma) + gamma * X, gamma},
            LogTerm{c2 + sc.log_sinh, -alpha * sc.coth}};
  }
  double drift(double X, double t) const override {
    if (gamma == alpha) return alpha * std::tanh(alpha * X + delta);
    const auto tm = terms(X, t);
    return two_term_slope(tm[0], tm[1]);
  }
  double log_q(double X, double t) const override {
    const auto tm = terms(X, t);
    return log_pref - nx::log_cosh(alpha * X + beta) + two_term_log(tm[0], tm[1]);
  }
};

// BM(mu) on the FPT law of tanh(alpha, beta), both signs of mu.
struct BmOnTanh final : Branch {
  double mu, alpha, beta, A, log_c, log_s, log_norm;
  BmOnTanh(double m, double al, double be, double a)
      : mu(m), alpha(al), beta(be), A(a),
        log_c(nx::log_cosh(a * al + be) - nx::log_cosh(be)),
        log_s(-be - a * al + nx::log_sinh(a * al) - nx::log_cosh(be)),
        log_norm(m < 0.0 ? log_one_minus_exp2(m, a) : std::log(a)) {}
  std::array<LogTerm, 2> terms(double X, double t) const {
    const double d = A - X;
    if (mu >= 0.0) {
      return {LogTerm{log_c - 0.5 * alpha * alpha * t - alpha * d, alpha},
              LogTerm{std::log(d) - log_norm + log_s, -1.0 / d}};
    }
    return {LogTerm{log_c - mu * X + 0.5 * (mu * mu - alpha * alpha) * t - alpha * d, alpha - mu},
            LogTerm{log_s + log_one_minus_exp2(mu, d) - log_norm,
                    2.0 * mu / std::expm1(-2.0 * mu * d)}};
  }
  double drift(double X, double t) const override {
    const auto tm = terms(X, t);
    return (mu >= 0.0 ? 0.0 : mu) + two_term_slope(tm[0], tm[1]);
  }
  double log_q(double X, double t) const override {
    const auto tm = terms(X, t);
    const double pref = mu >= 0.0 ? -mu * X + 0.5 * mu * mu * t : 0.0;
    return pref + two_term_log(tm[0], tm[1]);
  }
};

// BM(mu) on the FPT law of taboo(b).
struct BmOnTaboo final : Branch {
  double mu, A, B;
  BmOnTaboo(double m, double a, double b) : mu(m), A(a), B(b) {}
  double drift(double X, double t) const override {
    if (mu >= 0.0) return -1.0 / (B - X);
    const double d = A - X;
    const double norm = log_one_minus_exp2(mu, A);
    return mu + two_term_slope(
                    LogTerm{std::log(B - A) - mu * X + 0.5 * mu * mu * t, -mu},
                    LogTerm{std::log(A) + log_one_minus_exp2(mu, d) - norm,
                            2.0 * mu / std::expm1(-2.0 * mu * d)});
  }
  double log_q(double X, double t) const override {
    if (mu >= 0.0) return std::log((B - X) / B) - mu * X + 0.5 * mu * mu * t;
    const double d = A - X;
    const double norm = log_one_minus_exp2(mu, A);
    return two_term_log(LogTerm{std::log(B - A) - mu * X + 0.5 * mu * mu * t, 0.0},
                        LogTerm{std::log(A) + log_one_minus_exp2(mu, d) - norm, 0.0}) -
           std::log(B);
  }
};

// taboo(b) on the FPT law of BM(mu).
struct TabooOnBm final : Branch {
  double B, mu, A;
  TabooOnBm(double b, double m, double a) : B(b), mu(m), A(a) {}
  std::array<LogTerm, 2> terms(double X, double t) const {
    const double d = A - X;
    return {LogTerm{2.0 * A * mu - 0.5 * mu * mu * t - mu * X, -mu},
            LogTerm{log_one_minus_exp2(mu, A) + std::log(d / A), -1.0 / d}};
  }
  double drift(double X, double t) const override {
    if (mu >= 0.0) return mu;
    const auto tm = terms(X, t);
    return two_term_slope(tm[0], tm[1]);
  }
  double log_q(double X, double t) const override {
    const double pref = std::log(B) - std::log(B - X);
    if (mu >= 0.0) return pref + mu * X - 0.5 * mu * mu * t;
    const auto tm = terms(X, t);
    return pref + two_term_log(tm[0], tm[1]);
  }
};

// Forever survival; Q = S(inf | x) / S(inf | x0), with the taboo(a) limit for
// BM(mu >= 0).
struct Forever final : Branch {
  DriftModel source;
  double A;
  Forever(DriftModel s, double a) : source(std::move(s)), A(a) {}
  double drift(double X, double) const override {
    const double d = A - X;
    return std::visit(overloaded{
                          [&](const BmDrift& m) {
                            return m.mu >= 0.0 ? -1.0 / d : -m.mu * nx::coth(m.mu * d);
                          },
                          [&](const TanhDrift& m) { return -m.alpha * nx::coth(m.alpha * d); },
                          [&](const Taboo&) { return -1.0 / d; },
                      },
                      source);
  }
  double log_q(double X, double t) const override {
    const double d = A - X;
    return std::visit(
        overloaded{
            [&](const BmDrift& m) {
              if (m.mu >= 0.0) return std::log(d / A) - m.mu * X + 0.5 * m.mu * m.mu * t;
              return log_one_minus_exp2(m.mu, d) - log_one_minus_exp2(m.mu, A);
            },
            [&](const TanhDrift& m) {
              return nx::log_sinh(m.alpha * d) - nx::log_sinh(m.alpha * A) +
                     nx::log_cosh(m.beta) - nx::log_cosh(m.alpha * X + m.beta);
            },
            [&](const Taboo& m) { return std::log(d / A) + std::log(m.b / (m.b - X)); },
        },
        source);
  }
};

// Source model expressed in the origin frame.
DriftModel translate(const DriftModel& model, double x0) {
  return std::visit(overloaded{
                        [&](const BmDrift& m) -> DriftModel { return m; },
                        [&](const TanhDrift& m) -> DriftModel {
                          return TanhDrift{m.alpha, m.beta + m.alpha * x0};
                        },
                        [&](const Taboo& m) -> DriftModel { return Taboo{m.b - x0}; },
                    },
                    model);
}

void validate_scheme(const ConditioningScheme& scheme, const BarrierSetup& setup) {
  std::visit(overloaded{
                 [&](const DiracTime& s) {
                   if (!(s.t_star > setup.t0) || !std::isfinite(s.t_star))
                     throw ValidationError("DiracTime requires t_star > t0");
                 },
                 [](const ForeverSurvival&) {},
                 [](const FptOfBM& s) {
                   if (!std::isfinite(s.mu)) throw ValidationError("FptOfBM mu must be finite");
                 },
                 [](const FptOfTanh& s) {
                   if (!(s.gamma > 0.0) || !std::isfinite(s.gamma) || !std::isfinite(s.delta))
                     throw ValidationError("FptOfTanh requires finite gamma > 0 and finite delta");
                 },
                 [&](const FptOfTaboo& s) {
                   if (!(s.b > setup.a) || !std::isfinite(s.b))
                     throw ValidationError("FptOfTaboo requires b > a");
                 },
                 [](const FiniteHorizon& s) {
                   if (!s.gamma_star) throw ValidationError("FiniteHorizon requires gamma_star");
                 },
             },
             scheme);
}

[[noreturn]] void unsupported(const DriftModel& source, const ConditioningScheme& scheme) {
  throw DispatchError("no closed form for " + describe(source) + " conditioned on " +
                      describe(scheme) + "; supported pairs: " + supported_pairs());
}

struct Dispatched {
  std::shared_ptr<const Branch> branch;
  std::string label;
};

// Dispatch table for the closed-form FPT-target and forever-survival pairs.
Dispatched dispatch(const DriftModel& source, const BarrierSetup& setup,
                    const ConditioningScheme& scheme) {
  const double A = setup.a - setup.x0;
  const double x0 = setup.x0;
  const DriftModel src = translate(source, x0);
  if (std::holds_alternative<ForeverSurvival>(scheme)) {
    std::string label = std::visit(overloaded{
                                       [](const BmDrift& m) -> std::string {
                                         return m.mu >= 0.0 ? "bm(mu>=0)|forever|taboo(a)"
                                                            : "bm(mu<0)|forever|-mu coth";
                                       },
                                       [](const TanhDrift&) -> std::string {
                                         return "tanh|forever|-alpha coth";
                                       },
                                       [](const Taboo&) -> std::string {
                                         return "taboo(b)|forever|taboo(a)";
                                       },
                                   },
                                   source);
    return {std::make_shared<Forever>(src, A), label};
  }
  if (const auto* bm = std::get_if<FptOfBM>(&scheme)) {
    const double mu = bm->mu;
    if (const auto* th = std::get_if<TanhDrift>(&src)) {
      if (mu >= 0.0)
        return {std::make_shared<TanhOnBmPos>(th->alpha, th->beta, mu), "tanh|fpt-bm(mu>=0)|bm(mu)"};
      return {std::make_shared<TanhOnBmNeg>(th->alpha, th->beta, mu, A), "tanh|fpt-bm(mu<0)|type-II"};
    }
    if (const auto* tb = std::get_if<Taboo>(&src)) {
      if (mu >= 0.0) return {std::make_shared<TabooOnBm>(tb->b, mu, A), "taboo(b)|fpt-bm(mu>=0)|bm(mu)"};
      return {std::make_shared<TabooOnBm>(tb->b, mu, A), "taboo(b)|fpt-bm(mu<0)|b-free"};
    }
  }
  if (const auto* tt = std::get_if<FptOfTanh>(&scheme)) {
    const double delta = tt->delta + tt->gamma * x0;
    if (const auto* th = std::get_if<TanhDrift>(&src)) {
      const bool same = tt->gamma == th->alpha;
      return {std::make_shared<TanhOnTanh>(th->alpha, th->beta, tt->gamma, delta, A),
              same ? "tanh|fpt-tanh(alpha,delta)|tanh(alpha,delta)" : "tanh|fpt-tanh(gamma,delta)|three-parameter"};
    }
    if (const auto* m = std::get_if<BmDrift>(&src)) {
      return {std::make_shared<BmOnTanh>(m->mu, tt->gamma, delta, A),
              m->mu >= 0.0 ? "bm(mu>=0)|fpt-tanh|rational" : "bm(mu<0)|fpt-tanh|two-term"};
    }
  }
  if (const auto* tb = std::get_if<FptOfTaboo>(&scheme)) {
    if (const auto* m = std::get_if<BmDrift>(&src)) {
      return {std::make_shared<BmOnTaboo>(m->mu, A, tb->b - x0),
              m->mu >= 0.0 ? "bm(mu>=0)|fpt-taboo|taboo(b)" : "bm(mu<0)|fpt-taboo|two-term"};
    }
  }
  unsupported(source, scheme);
}

}  // namespace

std::string supported_pairs() {
  return "{any source | DiracTime}, {any source | ForeverSurvival}, {tanh | FptOfBM}, "
         "{taboo | FptOfBM}, {tanh | FptOfTanh}, {BM | FptOfTanh}, {BM | FptOfTaboo}, "
         "{any source | FiniteHorizon}";
}

std::string describe(const ConditioningScheme& scheme) {
  std::ostringstream out;
  out.precision(17);
  std::visit(overloaded{
                 [&](const DiracTime& s) { out << "DiracTime(t_star=" << s.t_star << ")"; },
                 [&](const ForeverSurvival&) { out << "ForeverSurvival"; },
                 [&](const FptOfBM& s) { out << "FptOfBM(mu=" << s.mu << ")"; },
                 [&](const FptOfTanh& s) {
                   out << "FptOfTanh(gamma=" << s.gamma << ",delta=" << s.delta << ")";
                 },
                 [&](const FptOfTaboo& s) { out << "FptOfTaboo(b=" << s.b << ")"; },
                 [&](const FiniteHorizon& s) { out << "FiniteHorizon(T=" << s.T << ")"; },
             },
             scheme);
  return out.str();
}

ConditionedDrift make_conditioned_drift(const DriftModel& source, const BarrierSetup& setup,
                                        const ConditioningScheme& scheme) {
  validate(source, setup);
  validate_scheme(scheme, setup);
  ConditionedDrift out{source, scheme, setup, {}, {}, std::nullopt, std::nullopt};
  if (const auto* dirac = std::get_if<DiracTime>(&scheme)) {
    const double t_star = dirac->t_star;
    out.evaluator = [setup, t_star](double x, double t) {
      return conditioning::drift_dirac_time(setup, t_star, {x, t});
    };
    out.label = "any|dirac-time|bridge";
    out.singular_level = setup.a;
    out.terminal_time = t_star;
    return out;
  }
  if (const auto* fh = std::get_if<FiniteHorizon>(&scheme)) {
    out.evaluator = [source, setup, fh = *fh](double x, double t) {
      return conditioning::drift_finite_horizon(source, setup, fh, {x, t});
    };
    out.label = "any|finite-horizon|quadrature";
    return out;
  }
  auto d = dispatch(source, setup, scheme);
  out.label = d.label;
  if (std::holds_alternative<ForeverSurvival>(scheme)) out.singular_level = setup.a;
  out.evaluator = [branch = d.branch, setup](double x, double t) {
    const Frame f = to_frame(setup, {x, t}, "conditioned drift");
    return branch->drift(f.X, f.t);
  };
  return out;
}

QFunction make_q_function(const DriftModel& source, const BarrierSetup& setup,
                          const ConditioningScheme& scheme) {
  validate(source, setup);
  validate_scheme(scheme, setup);
  QFunction q;
  q.description = describe(source) + " conditioned on " + describe(scheme);
  if (const auto* fh = std::get_if<FiniteHorizon>(&scheme)) {
    q.closed_form = false;
    q.evaluator = [source, setup, fh = *fh](double x, double t) {
      return conditioning::q_finite_horizon(source, setup, fh, {x, t});
    };
    return q;
  }
  q.evaluator = [source, setup, scheme](double x, double t) {
    return conditioning::q_forever_and_partial(source, setup, scheme, {x, t});
  };
  return q;
}

namespace conditioning {

double drift_dirac_time(const BarrierSetup& setup, double t_star, SpaceTimePoint p) {
  const Frame f = to_frame(setup, p, "drift_dirac_time");
  (void)f;
  if (!(p.t < t_star)) throw DomainError("drift_dirac_time requires t < t_star");
  const double d = setup.a - p.x;
  return -1.0 / d + d / (t_star - p.t);
}

double drift_forever_survival(const DriftModel& source, const BarrierSetup& setup,
                              SpaceTimePoint p) {
  validate(source, setup);
  const Frame f = to_frame(setup, p, "drift_forever_survival");
  return Forever(translate(source, setup.x0), f.A).drift(f.X, f.t);
}

double drift_tanh_on_bm_fpt(const TanhDrift& source, const BarrierSetup& setup, double mu,
                            SpaceTimePoint p) {
  validate(source, setup);
  const Frame f = to_frame(setup, p, "drift_tanh_on_bm_fpt");
  const double beta = source.beta + source.alpha * setup.x0;
  if (mu >= 0.0) return mu;
  return TanhOnBmNeg(source.alpha, beta, mu, f.A).drift(f.X, f.t);
}

double drift_tanh_on_tanh_fpt(const TanhDrift& source, const BarrierSetup& setup,
                              const FptOfTanh& target, SpaceTimePoint p) {
  validate(source, setup);
  validate_scheme(target, setup);
  const Frame f = to_frame(setup, p, "drift_tanh_on_tanh_fpt");
  return TanhOnTanh(source.alpha, source.beta + source.alpha * setup.x0, target.gamma,
                    target.delta + target.gamma * setup.x0, f.A)
      .drift(f.X, f.t);
}

double drift_bm_on_tanh_fpt(const BmDrift& source, const BarrierSetup& setup,
                            const TanhDrift& target, SpaceTimePoint p) {
  validate(source, setup);
  validate(target);
  const Frame f = to_frame(setup, p, "drift_bm_on_tanh_fpt");
  return BmOnTanh(source.mu, target.alpha, target.beta + target.alpha * setup.x0, f.A)
      .drift(f.X, f.t);
}

double drift_bm_on_taboo_fpt(const BmDrift& source, const BarrierSetup& setup, double b_target,
                             SpaceTimePoint p) {
  validate(source, setup);
  validate_scheme(FptOfTaboo{b_target}, setup);
  require_below(b_target, p.x, "drift_bm_on_taboo_fpt");
  const Frame f = to_frame(setup, p, "drift_bm_on_taboo_fpt");
  return BmOnTaboo(source.mu, f.A, b_target - setup.x0).drift(f.X, f.t);
}

double drift_taboo_on_bm_fpt(const Taboo& source, const BarrierSetup& setup, double mu,
                             SpaceTimePoint p) {
  validate(source, setup);
  const Frame f = to_frame(setup, p, "drift_taboo_on_bm_fpt");
  return TabooOnBm(source.b - setup.x0, mu, f.A).drift(f.X, f.t);
}

double q_forever_and_partial(const DriftModel& source, const BarrierSetup& setup,
                             const ConditioningScheme& scheme, SpaceTimePoint p) {
  validate(source, setup);
  validate_scheme(scheme, setup);
  if (std::holds_alternative<FiniteHorizon>(scheme)) unsupported(source, scheme);
  const Frame f = to_frame(setup, p, "q_forever_and_partial");
  if (const auto* dirac = std::get_if<DiracTime>(&scheme)) {
    if (!(p.t < dirac->t_star)) throw DomainError("Dirac Q requires t < t_star");
    return std::exp(analytics::log_fpt_density(source, setup.a, p, dirac->t_star) -
                    analytics::log_fpt_density(source, setup.a, {setup.x0, setup.t0},
                                               dirac->t_star));
  }
  return std::exp(dispatch(source, setup, scheme).branch->log_q(f.X, f.t));
}

double conditioned_propagator_tanh_on_tanh(const TanhDrift& source, const BarrierSetup& setup,
                                           const FptOfTanh& target, SpaceTimePoint p) {
  if (setup.x0 != 0.0 || setup.t0 != 0.0)
    throw DomainError("conditioned tanh-on-tanh propagator is available for origin starts only");
  validate(source, setup);
  validate_scheme(target, setup);
  if (!(p.t > 0.0)) throw DomainError("conditioned propagator requires t > 0");
  if (!(p.x < setup.a)) return 0.0;
  const TanhOnTanh branch(source.alpha, source.beta, target.gamma, target.delta, setup.a);
  return std::exp(branch.log_q(p.x, p.t) +
                  analytics::log_propagator_absorbed(source, setup.a, {0.0, 0.0}, p));
}

double conditioned_survival_tanh_on_tanh(const FptOfTanh& target, const BarrierSetup& setup,
                                         double t) {
  if (setup.x0 != 0.0 || setup.t0 != 0.0)
    throw DomainError("conditioned tanh-on-tanh survival is available for origin starts only");
  validate_scheme(target, setup);
  if (!(setup.a > 0.0)) throw ValidationError("barrier must lie above the origin");
  if (!(t > 0.0)) return 1.0;
  const double a = setup.a;
  const double g = target.gamma;
  const double root = std::sqrt(2.0 * t);
  const double lc = nx::log_cosh(a * g + target.delta) - nx::log_cosh(target.delta);
  const double raw = 1.0 - 0.5 * (nx::exp_times_erfc(lc - a * g, (a - t * g) / root) +
                                  nx::exp_times_erfc(lc + a * g, (a + t * g) / root));
  return nx::clamp_probability(raw, "conditioned_survival_tanh_on_tanh");
}

double reciprocity_check(const QFunction& q_forward, const QFunction& q_backward,
                         const std::vector<SpaceTimePoint>& grid) {
  double worst = 0.0;
  for (const auto& p : grid) {
    worst = std::max(worst, std::abs(q_forward(p.x, p.t) * q_backward(p.x, p.t) - 1.0));
  }
  return worst;
}

}  // namespace conditioning
}  // namespace fptlab
