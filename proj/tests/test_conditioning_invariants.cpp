#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "fptlab/analytics.hpp"
#include "fptlab/conditioning.hpp"
#include "fptlab/quadrature.hpp"

using namespace fptlab;
namespace cd = fptlab::conditioning;

namespace {

struct Pair {
  DriftModel source;
  ConditioningScheme scheme;
};

// Every closed-form (source, scheme, sign) branch.
std::vector<Pair> closed_form_pairs() {
  return {
      {BmDrift{0.4}, ForeverSurvival{}},       {BmDrift{-0.6}, ForeverSurvival{}},
      {TanhDrift{0.8, 0.3}, ForeverSurvival{}}, {Taboo{2.0}, ForeverSurvival{}},
      {TanhDrift{0.8, 0.3}, FptOfBM{0.4}},      {TanhDrift{0.8, 0.3}, FptOfBM{-0.6}},
      {TanhDrift{0.8, 0.3}, FptOfTanh{0.5, 0.3}}, {TanhDrift{0.8, 0.3}, FptOfTanh{1.3, -0.2}},
      {BmDrift{0.4}, FptOfTanh{0.8, 0.3}},      {BmDrift{-0.6}, FptOfTanh{0.8, 0.3}},
      {BmDrift{-1.2}, FptOfTanh{0.8, 0.3}},     {BmDrift{0.4}, FptOfTaboo{2.0}},
      {BmDrift{-0.6}, FptOfTaboo{2.0}},         {Taboo{2.0}, FptOfBM{0.4}},
      {Taboo{2.0}, FptOfBM{-0.6}},              {TanhDrift{0.8, 0.3}, DiracTime{6.0}},
  };
}

std::string name(const Pair& p) { return describe(p.source) + " | " + describe(p.scheme); }

const std::vector<BarrierSetup> kSetups = {{1.0, 0.0, 0.0}, {0.5, -1.0, 0.5}};

}  // namespace

TEST(ConditioningInvariants, QIsPositiveOnRandomPoints) {
  std::mt19937_64 gen(99);
  for (const auto& setup : kSetups) {
    std::uniform_real_distribution<double> ux(setup.a - 4.0, setup.a - 1e-6);
    std::uniform_real_distribution<double> ut(setup.t0, setup.t0 + 3.5);
    for (const auto& p : closed_form_pairs()) {
      const auto q = make_q_function(p.source, setup, p.scheme);
      int bad = 0;
      for (int i = 0; i < 10000; ++i) {
        const double v = q(ux(gen), ut(gen));
        if (!(v > 0.0) || !std::isfinite(v)) ++bad;
      }
      EXPECT_EQ(bad, 0) << name(p);
    }
  }
}

TEST(ConditioningInvariants, DriftEqualsSourcePlusGradLogQ) {
  for (const auto& setup : kSetups) {
    const double layer = 1e-3 * (setup.a - setup.x0);
    for (const auto& p : closed_form_pairs()) {
      const auto q = make_q_function(p.source, setup, p.scheme);
      const auto mu_star = make_conditioned_drift(p.source, setup, p.scheme);
      double worst = 0.0;
      for (int i = 0; i < 12; ++i) {
        const double x = setup.a - 3.0 + (3.0 - layer) * i / 11.0;
        for (double dt : {0.05, 0.4, 1.0, 2.5, 3.5}) {
          const double t = setup.t0 + dt;
          // Five-point stencil; the step scales with the distance to the barrier,
          // where log Q varies fastest.
          const double h = std::min(1e-4, 1e-3 * (setup.a - x));
          auto lq = [&](double k) { return std::log(q(x + k * h, t)); };
          const double fd = (8.0 * (lq(1) - lq(-1)) - (lq(2) - lq(-2))) / (12.0 * h);
          const double src = analytics::drift_value(p.source, {x, t});
          worst = std::max(worst, std::abs(src + fd - mu_star(x, t)));
        }
      }
      EXPECT_LE(worst, 1e-6) << name(p);
    }
  }
}

TEST(ConditioningInvariants, BetaIndependence) {
  const BarrierSetup s{1.0, 0.0, 0.0};
  for (double x : {-1.5, 0.0, 0.8}) {
    for (double t : {0.2, 2.0, 30.0}) {
      const double ref_tt = cd::drift_tanh_on_tanh_fpt(TanhDrift{0.8, 0.0}, s, {1.3, 0.2}, {x, t});
      const double ref_t2 = cd::drift_tanh_on_bm_fpt(TanhDrift{0.8, 0.0}, s, -0.6, {x, t});
      for (double beta : {-2.0, 3.0}) {
        EXPECT_NEAR(cd::drift_tanh_on_tanh_fpt(TanhDrift{0.8, beta}, s, {1.3, 0.2}, {x, t}),
                    ref_tt, 1e-12);
        EXPECT_NEAR(cd::drift_tanh_on_bm_fpt(TanhDrift{0.8, beta}, s, -0.6, {x, t}), ref_t2,
                    1e-12);
      }
    }
  }
}

TEST(ConditioningInvariants, TabooStateIndependence) {
  const BarrierSetup s{1.0, 0.0, 0.0};
  for (double x : {-1.5, 0.0, 0.8})
    for (double t : {0.2, 2.0, 30.0})
      EXPECT_NEAR(cd::drift_taboo_on_bm_fpt(Taboo{2.0}, s, -0.6, {x, t}),
                  cd::drift_taboo_on_bm_fpt(Taboo{10.0}, s, -0.6, {x, t}), 1e-12);
}

TEST(ConditioningInvariants, LongTimeLimits) {
  const BarrierSetup s{1.0, 0.0, 0.0};
  const double t = 1e3;
  auto rel = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
  for (double x : {-1.0, 0.3, 0.9}) {
    const double d = 1.0 - x;
    // tanh on tanh: gamma > alpha -> Williams, gamma < alpha -> gamma
    EXPECT_LE(rel(cd::drift_tanh_on_tanh_fpt(TanhDrift{0.8, 0.1}, s, {1.3, 0.2}, {x, t}),
                  -0.8 / std::tanh(0.8 * d)), 1e-3);
    EXPECT_LE(rel(cd::drift_tanh_on_tanh_fpt(TanhDrift{0.8, 0.1}, s, {0.5, 0.2}, {x, t}), 0.5),
              1e-3);
    // BM(mu >= 0) on tanh -> taboo(a)
    EXPECT_LE(rel(cd::drift_bm_on_tanh_fpt(BmDrift{0.4}, s, {0.8, 0.3}, {x, t}), -1.0 / d), 1e-3);
    // BM(mu < 0) on tanh: |mu| < alpha -> -mu coth, |mu| > alpha -> alpha
    EXPECT_LE(rel(cd::drift_bm_on_tanh_fpt(BmDrift{-0.6}, s, {0.8, 0.3}, {x, t}),
                  0.6 / std::tanh(-0.6 * d)), 1e-3);
    EXPECT_LE(rel(cd::drift_bm_on_tanh_fpt(BmDrift{-1.2}, s, {0.8, 0.3}, {x, t}), 0.8), 1e-3);
    // taboo on BM(mu < 0) -> taboo(a)
    EXPECT_LE(rel(cd::drift_taboo_on_bm_fpt(Taboo{2.0}, s, -0.6, {x, t}), -1.0 / d), 1e-3);
  }
}

TEST(ConditioningInvariants, NearBarrierIsTabooLike) {
  const BarrierSetup s{1.0, 0.0, 0.0};
  const double x = 1.0 - 1e-6;
  auto rel = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
  EXPECT_LE(rel(cd::drift_tanh_on_tanh_fpt(TanhDrift{0.8, 0.1}, s, {1.3, 0.2}, {x, 1e3}), -1e6),
            1e-3);
  EXPECT_LE(rel(cd::drift_forever_survival(TanhDrift{0.8, 0.1}, s, {x, 0.0}), -1e6), 1e-3);
  EXPECT_LE(rel(cd::drift_taboo_on_bm_fpt(Taboo{2.0}, s, -0.6, {x, 1e3}), -1e6), 1e-3);
}

TEST(ConditioningInvariants, BmOnTabooLimits) {
  const BarrierSetup s{1.0, 0.0, 0.0};
  for (double x : {-1.0, 0.0, 0.5}) {
    for (double t : {0.3, 2.0}) {
      const double d = 1.0 - x;
      EXPECT_NEAR(cd::drift_bm_on_taboo_fpt(BmDrift{-0.5}, s, 1.0 + 1e-9, {x, t}),
                  0.5 / std::tanh(-0.5 * d), 1e-6);
      EXPECT_NEAR(cd::drift_bm_on_taboo_fpt(BmDrift{-1e-12}, s, 2.0, {x, t}), -1.0 / (2.0 - x),
                  1e-6);
    }
  }
}

TEST(ConditioningInvariants, ConditionedPropagatorIntegratesToSurvival) {
  const BarrierSetup s{1.0, 0.0, 0.0};
  const FptOfTanh target{0.5, 0.3};
  const double t = 1.0;
  const double expected = cd::conditioned_survival_tanh_on_tanh(target, s, t);
  std::vector<double> masses;
  for (double alpha : {1.0, 2.0}) {
    const double mass =
        quadrature::integrate(
            [&](double y) {
              return cd::conditioned_propagator_tanh_on_tanh(TanhDrift{alpha, 0.4}, s, target,
                                                             {y, t});
            },
            -std::numeric_limits<double>::infinity(), 1.0)
            .value;
    EXPECT_NEAR(mass, expected, 1e-8) << "alpha " << alpha;
    masses.push_back(mass);
  }
  EXPECT_NE(cd::conditioned_propagator_tanh_on_tanh(TanhDrift{1.0, 0.4}, s, target, {0.2, t}),
            cd::conditioned_propagator_tanh_on_tanh(TanhDrift{2.0, 0.4}, s, target, {0.2, t}));
  // beta drops out
  EXPECT_NEAR(cd::conditioned_propagator_tanh_on_tanh(TanhDrift{1.0, 0.4}, s, target, {0.2, t}),
              cd::conditioned_propagator_tanh_on_tanh(TanhDrift{1.0, -1.0}, s, target, {0.2, t}),
              1e-14);
}

TEST(ConditioningInvariants, ConditionedPropagatorConcentratesAtStart) {
  const BarrierSetup s{1.0, 0.0, 0.0};
  const double t = 1e-4;
  const auto p = [&](double y) {
    return cd::conditioned_propagator_tanh_on_tanh(TanhDrift{1.0, 0.0}, s, {0.5, 0.3}, {y, t});
  };
  const double near =
      quadrature::integrate(p, -0.05, 0.05).value;
  EXPECT_NEAR(near, 1.0, 1e-6);
}
