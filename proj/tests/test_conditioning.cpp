#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fptlab/analytics.hpp"
#include "fptlab/conditioning.hpp"
#include "fptlab/errors.hpp"

using namespace fptlab;
namespace cd = fptlab::conditioning;

namespace {
const BarrierSetup kUnit{1.0, 0.0, 0.0};

double drift(const DriftModel& src, const BarrierSetup& s, const ConditioningScheme& sc, double x,
             double t) {
  return make_conditioned_drift(src, s, sc)(x, t);
}
}  // namespace

// Values below come from tests/oracles/oracle_values.py, which differentiates
// log Q numerically at 40 digits.
TEST(ConditionedDriftOracle, BmNegOnTanhFig1Point) {
  EXPECT_NEAR(drift(BmDrift{-1.0}, {5.0, 0.0, 0.0}, FptOfTanh{1.0, 0.0}, 2.0, 1.0),
              0.96402758007581688, 1e-12);
}

TEST(ConditionedDriftOracle, BmNegOnTanhGeneric) {
  EXPECT_NEAR(drift(BmDrift{-0.6}, kUnit, FptOfTanh{0.8, 0.3}, 0.3, 0.7), 0.36410635799042319,
              1e-12);
}

TEST(ConditionedDriftOracle, TanhOnTanh) {
  EXPECT_NEAR(drift(TanhDrift{1.0, 0.4}, kUnit, FptOfTanh{0.5, 0.3}, -0.5, 2.0),
              0.11354659788140153, 1e-12);
}

TEST(ConditionedDriftOracle, TanhOnBmNeg) {
  EXPECT_NEAR(drift(TanhDrift{1.0, 0.0}, kUnit, FptOfBM{-0.7}, 0.2, 1.5), -0.57485773988997777,
              1e-12);
}

TEST(ConditionedDriftOracle, TabooOnBmNeg) {
  EXPECT_NEAR(drift(Taboo{2.0}, kUnit, FptOfBM{-0.5}, 0.0, 1.0), -0.49101961728758813, 1e-12);
}

TEST(ConditionedDrift, DiracBridge) {
  const auto d = make_conditioned_drift(TanhDrift{1.0, 0.2}, kUnit, DiracTime{2.0});
  EXPECT_NEAR(d(0.25, 0.5), -1.0 / 0.75 + 0.75 / 1.5, 1e-15);
  EXPECT_EQ(d.label, "any|dirac-time|bridge");
  EXPECT_EQ(d.terminal_time, 2.0);
  EXPECT_EQ(d.singular_level, 1.0);
  EXPECT_THROW(d(0.0, 2.0), DomainError);
  // large a: the Brownian-bridge term dominates
  const BarrierSetup far{1e6, 0.0, 0.0};
  EXPECT_NEAR(cd::drift_dirac_time(far, 1.0, {0.0, 0.5}) / (1e6 / 0.5), 1.0, 1e-11);
}

TEST(ConditionedDrift, ForeverSurvivalExamples) {
  EXPECT_NEAR(cd::drift_forever_survival(Taboo{3.0}, kUnit, {0.2, 0.0}), -1.0 / 0.8, 1e-15);
  EXPECT_NEAR(cd::drift_forever_survival(Taboo{7.0}, kUnit, {0.2, 4.0}), -1.0 / 0.8, 1e-15);
  for (double beta : {-1.0, 0.0, 2.0}) {
    EXPECT_NEAR(cd::drift_forever_survival(TanhDrift{1.0, beta}, kUnit, {0.0, 0.0}),
                -1.3130352854993313, 1e-14);
  }
  EXPECT_NEAR(cd::drift_forever_survival(BmDrift{-1e-9}, kUnit, {0.5, 0.0}), -2.0, 1e-8);
  EXPECT_NEAR(cd::drift_forever_survival(BmDrift{0.4}, kUnit, {0.5, 0.0}), -2.0, 1e-15);
  EXPECT_NEAR(cd::drift_forever_survival(BmDrift{-0.8}, kUnit, {0.5, 0.0}),
              0.8 / std::tanh(-0.8 * 0.5), 1e-14);
  EXPECT_THROW(cd::drift_forever_survival(BmDrift{-0.8}, kUnit, {1.0, 0.0}), DomainError);
}

TEST(ConditionedDrift, TanhOnBmPositiveIsBm) {
  for (double x : {-3.0, 0.0, 0.9})
    for (double t : {0.0, 1.0, 50.0})
      EXPECT_EQ(cd::drift_tanh_on_bm_fpt(TanhDrift{2.0, -0.5}, kUnit, 0.7, {x, t}), 0.7);
}

TEST(ConditionedDrift, TanhOnTanhSameAlphaIsTanh) {
  for (double x : {-2.0, 0.0, 0.7}) {
    for (double t : {0.1, 3.0}) {
      EXPECT_NEAR(cd::drift_tanh_on_tanh_fpt(TanhDrift{1.0, -1.0}, kUnit, {1.0, 0.3}, {x, t}),
                  std::tanh(x + 0.3), 1e-15);
    }
  }
}

TEST(ConditionedDrift, BmOnTabooPositiveIsTaboo) {
  EXPECT_NEAR(cd::drift_bm_on_taboo_fpt(BmDrift{0.3}, {1.5, 0.0, 0.0}, 2.0, {1.0, 0.3}), -1.0,
              1e-15);
  EXPECT_THROW(cd::drift_bm_on_taboo_fpt(BmDrift{0.3}, kUnit, 2.0, {2.0, 0.3}), DomainError);
}

TEST(ConditionedDrift, TabooOnBmPositiveIsBm) {
  EXPECT_EQ(cd::drift_taboo_on_bm_fpt(Taboo{2.0}, kUnit, 0.4, {0.3, 2.0}), 0.4);
  EXPECT_EQ(cd::drift_taboo_on_bm_fpt(Taboo{9.0}, kUnit, 0.4, {-5.0, 0.1}), 0.4);
}

TEST(ConditionedDrift, ShiftedStartIsTranslation) {
  const BarrierSetup shifted{0.5, -1.0, 2.0};
  const BarrierSetup origin{1.5, 0.0, 0.0};
  const auto a = make_conditioned_drift(TanhDrift{0.7, 0.2}, shifted, FptOfTanh{1.1, -0.4});
  const auto b = make_conditioned_drift(TanhDrift{0.7, 0.2 - 0.7}, origin, FptOfTanh{1.1, -0.4 - 1.1});
  EXPECT_NEAR(a(-0.3, 3.5), b(0.7, 1.5), 1e-13);
  const auto c = make_conditioned_drift(BmDrift{-0.5}, shifted, FptOfTaboo{1.5});
  const auto d = make_conditioned_drift(BmDrift{-0.5}, origin, FptOfTaboo{2.5});
  EXPECT_NEAR(c(-0.3, 3.5), d(0.7, 1.5), 1e-13);
}

TEST(QFunction, Examples) {
  // Forever survival at the start is 1.
  for (const DriftModel& m : {DriftModel{BmDrift{-0.5}}, DriftModel{BmDrift{0.5}},
                              DriftModel{TanhDrift{1.0, 0.3}}, DriftModel{Taboo{2.0}}}) {
    EXPECT_NEAR(make_q_function(m, kUnit, ForeverSurvival{})(0.0, 0.0), 1.0, 1e-15) << describe(m);
  }
  const double mu = 0.3, b = 2.0, x = 0.4, t = 1.7;
  EXPECT_NEAR(make_q_function(BmDrift{mu}, kUnit, FptOfTaboo{b})(x, t),
              (b - x) / b * std::exp(-mu * x + mu * mu * t / 2), 1e-14);
  EXPECT_NEAR(make_q_function(Taboo{b}, kUnit, FptOfBM{mu})(x, t),
              b / (b - x) * std::exp(mu * x - mu * mu * t / 2), 1e-14);
  // Dirac Q is the FPT ratio at t_star
  const auto q = make_q_function(TanhDrift{1.0, 0.0}, kUnit, DiracTime{2.0});
  EXPECT_NEAR(q(0.3, 0.5),
              analytics::fpt_density(TanhDrift{1.0, 0.0}, {1.0, 0.3, 0.5}, 2.0) /
                  analytics::fpt_density(TanhDrift{1.0, 0.0}, kUnit, 2.0),
              1e-13);
}

TEST(Dispatch, LabelsFollowSignOfMu) {
  EXPECT_EQ(make_conditioned_drift(TanhDrift{}, kUnit, FptOfBM{0.2}).label, "tanh|fpt-bm(mu>=0)|bm(mu)");
  EXPECT_EQ(make_conditioned_drift(TanhDrift{}, kUnit, FptOfBM{-0.2}).label, "tanh|fpt-bm(mu<0)|type-II");
  EXPECT_EQ(make_conditioned_drift(BmDrift{0.1}, kUnit, FptOfTanh{}).label, "bm(mu>=0)|fpt-tanh|rational");
  EXPECT_EQ(make_conditioned_drift(BmDrift{-0.1}, kUnit, FptOfTanh{}).label, "bm(mu<0)|fpt-tanh|two-term");
  EXPECT_EQ(make_conditioned_drift(BmDrift{-0.1}, kUnit, ForeverSurvival{}).label, "bm(mu<0)|forever|-mu coth");
  EXPECT_EQ(make_conditioned_drift(Taboo{2.0}, kUnit, FptOfBM{-0.3}).label, "taboo(b)|fpt-bm(mu<0)|b-free");
}

TEST(Dispatch, UnsupportedPairsListAlternatives) {
  try {
    make_conditioned_drift(TanhDrift{}, kUnit, FptOfTaboo{2.0});
    FAIL() << "expected DispatchError";
  } catch (const DispatchError& e) {
    EXPECT_NE(std::string(e.what()).find("supported pairs"), std::string::npos);
  }
  EXPECT_THROW(make_conditioned_drift(Taboo{2.0}, kUnit, FptOfTanh{}), DispatchError);
  EXPECT_THROW(make_conditioned_drift(BmDrift{}, kUnit, FptOfBM{0.1}), DispatchError);
  EXPECT_THROW(make_conditioned_drift(Taboo{2.0}, kUnit, FptOfTaboo{3.0}), DispatchError);
}

TEST(Dispatch, ValidationErrors) {
  EXPECT_THROW(make_conditioned_drift(BmDrift{}, kUnit, DiracTime{0.0}), ValidationError);
  EXPECT_THROW(make_conditioned_drift(BmDrift{}, kUnit, FptOfTanh{0.0, 0.0}), ValidationError);
  EXPECT_THROW(make_conditioned_drift(BmDrift{}, kUnit, FptOfTaboo{0.5}), ValidationError);
  EXPECT_THROW(make_conditioned_drift(TanhDrift{-1.0, 0.0}, kUnit, ForeverSurvival{}), ValidationError);
}

TEST(Dispatch, GuardBandIsDomainError) {
  const auto d = make_conditioned_drift(TanhDrift{}, kUnit, ForeverSurvival{});
  EXPECT_THROW(d(1.0 - 1e-13, 0.0), DomainError);
  EXPECT_TRUE(std::isfinite(d(1.0 - 1e-9, 0.0)));
  EXPECT_THROW(d(0.0, -1.0), DomainError);
}

TEST(Reciprocity, BmAndTabooAreExactInverses) {
  const auto fwd = make_q_function(BmDrift{0.3}, kUnit, FptOfTaboo{2.0});
  const auto bwd = make_q_function(Taboo{2.0}, kUnit, FptOfBM{0.3});
  std::vector<SpaceTimePoint> grid;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) grid.push_back({-3.0 + 3.95 * i / 19.0, 0.05 * j * j});
  EXPECT_LE(cd::reciprocity_check(fwd, bwd, grid), 1e-12);
}

TEST(Reciprocity, IdentityWithItself) {
  QFunction one{[](double, double) { return 1.0; }, true, "1"};
  EXPECT_EQ(cd::reciprocity_check(one, one, {{0.0, 0.0}, {0.5, 3.0}}), 0.0);
}

TEST(Reciprocity, TanhCycleIsMeasured) {
  const auto fwd = make_q_function(TanhDrift{1.0, 0.0}, kUnit, FptOfTanh{1.0, 0.5});
  const auto bwd = make_q_function(TanhDrift{1.0, 0.5}, kUnit, FptOfTanh{1.0, 0.0});
  const double dev = cd::reciprocity_check(fwd, bwd, {{-1.0, 0.5}, {0.0, 1.0}, {0.5, 2.0}});
  EXPECT_TRUE(std::isfinite(dev));
  RecordProperty("tanh_cycle_deviation", std::to_string(dev));
}

TEST(ConditionedTanhOnTanh, SurvivalMatchesTargetLaw) {
  const FptOfTanh target{0.5, 0.3};
  EXPECT_NEAR(cd::conditioned_survival_tanh_on_tanh(target, kUnit, 1.0),
              analytics::survival_to_T(TanhDrift{0.5, 0.3}, kUnit, 1.0), 1e-12);
  EXPECT_NEAR(cd::conditioned_survival_tanh_on_tanh(target, kUnit, 1e-10), 1.0, 1e-12);
  EXPECT_NEAR(cd::conditioned_survival_tanh_on_tanh(target, kUnit, 1e6),
              analytics::survival_forever(TanhDrift{0.5, 0.3}, kUnit), 1e-10);
  double prev = 1.0;
  for (double t = 0.1; t < 20.0; t *= 1.5) {
    const double s = cd::conditioned_survival_tanh_on_tanh(target, kUnit, t);
    EXPECT_LE(s, prev);
    EXPECT_GE(s, 0.0);
    prev = s;
  }
}

TEST(ConditionedTanhOnTanh, OriginOnly) {
  EXPECT_THROW(cd::conditioned_propagator_tanh_on_tanh(TanhDrift{}, {1.0, 0.5, 0.0}, {0.5, 0.3},
                                                       {0.0, 1.0}),
               DomainError);
  EXPECT_THROW(cd::conditioned_survival_tanh_on_tanh({0.5, 0.3}, {1.0, -0.5, 0.0}, 1.0),
               DomainError);
}
