#include <gtest/gtest.h>

#include <cmath>

#include "fptlab/analytics.hpp"
#include "fptlab/errors.hpp"

using namespace fptlab;
namespace an = fptlab::analytics;

// Frozen reference values from tests/oracles/oracle_values.py (40-digit mpmath).

TEST(Analytics, DriftValues) {
  EXPECT_NEAR(an::drift_value(TanhDrift{1.0, 0.0}, {5.0, 0.0}), 0.99990920426259513, 1e-15);
  EXPECT_EQ(an::drift_value(BmDrift{-0.3}, {4.0, 2.0}), -0.3);
  EXPECT_NEAR(an::drift_value(Taboo{2.0}, {0.5, 0.0}), -1.0 / 1.5, 1e-15);
}

TEST(Analytics, GirsanovWeightTanh) {
  EXPECT_NEAR(an::girsanov_weight(TanhDrift{1.0, 0.0}, 0.0, 1.0, 0.0, 1.0), 0.93592571542427899,
              1e-14);
}

TEST(Analytics, GirsanovWeightBm) {
  const double mu = 0.4;
  EXPECT_NEAR(an::girsanov_weight(BmDrift{mu}, 0.2, 1.0, 0.5, 2.0),
              std::exp(mu * 0.8 - 0.5 * mu * mu * 1.5), 1e-15);
}

TEST(Analytics, FreePropagatorTanh) {
  EXPECT_NEAR(an::propagator_free(TanhDrift{1.0, 0.0}, {0.0, 0.0}, {1.0, 1.0}),
              0.22646662345731036, 1e-14);
}

TEST(Analytics, AbsorbedPropagatorBm) {
  const BarrierSetup s{1.0, 0.0, 0.0};
  EXPECT_NEAR(an::propagator_absorbed(BmDrift{0.0}, s, {0.0, 0.0}, {0.0, 1.0}),
              0.34495131388824463, 1e-14);
  EXPECT_EQ(an::propagator_absorbed(BmDrift{0.0}, s, {0.0, 0.0}, {1.2, 1.0}), 0.0);
}

TEST(Analytics, FptDensities) {
  const BarrierSetup s{1.0, 0.0, 0.0};
  EXPECT_NEAR(an::fpt_density(BmDrift{0.0}, s, 1.0), 0.24197072451914335, 1e-14);
  EXPECT_NEAR(an::fpt_density(TanhDrift{1.0, 0.0}, s, 1.0), 0.22646662345731036, 1e-14);
  EXPECT_EQ(an::fpt_density(BmDrift{0.0}, s, 0.0), 0.0);
}

TEST(Analytics, AbsorptionAndSurvival) {
  EXPECT_NEAR(an::absorption_probability(TanhDrift{1.0, 0.0}, {5.0, 0.0, 0.0}),
              0.50002269996488124, 1e-14);
  EXPECT_NEAR(an::survival_forever(BmDrift{-1.0}, {1.0, 0.0, 0.0}), 0.86466471676338731, 1e-14);
  EXPECT_EQ(an::survival_forever(BmDrift{0.5}, {1.0, 0.0, 0.0}), 0.0);
  EXPECT_NEAR(an::survival_forever(TanhDrift{0.5, 0.3}, {1.0, 0.0, 0.0}), 0.22398793372592547,
              1e-14);
  EXPECT_NEAR(an::survival_forever(Taboo{3.0}, {1.0, 0.0, 0.0}), 1.0 / 3.0, 1e-15);
}

TEST(Analytics, FiniteHorizonSurvival) {
  const BarrierSetup s{1.0, 0.0, 0.0};
  EXPECT_NEAR(an::survival_to_T(TanhDrift{1.0, 0.0}, s, 1.0), 0.62074011260517192, 1e-12);
  EXPECT_NEAR(an::survival_to_T(TanhDrift{0.5, 0.3}, s, 1.0), 0.61964673405887982, 1e-12);
  EXPECT_NEAR(an::survival_to_T(BmDrift{0.0}, s, 1.0), std::erf(1.0 / std::sqrt(2.0)), 1e-14);
  EXPECT_EQ(an::survival_to_T(BmDrift{0.0}, s, 0.0), 1.0);
}

TEST(Analytics, ShiftedStartIsTranslation) {
  const DriftModel bm = BmDrift{0.3};
  const BarrierSetup shifted{2.5, 1.5, 3.0};
  const BarrierSetup origin{1.0, 0.0, 0.0};
  EXPECT_NEAR(an::fpt_density(bm, shifted, 4.2), an::fpt_density(bm, origin, 1.2), 1e-15);
  // tanh: beta absorbs the shift
  const DriftModel th = TanhDrift{0.8, 0.1};
  const DriftModel th_origin = TanhDrift{0.8, 0.1 + 0.8 * 1.5};
  EXPECT_NEAR(an::fpt_density(th, shifted, 4.2), an::fpt_density(th_origin, origin, 1.2), 1e-14);
  EXPECT_NEAR(an::survival_to_T(th, shifted, 5.0), an::survival_to_T(th_origin, origin, 2.0),
              1e-12);
}

TEST(Analytics, FptTailIsFiniteFarOut) {
  const BarrierSetup s{1.0, 0.0, 0.0};
  const double f = an::fpt_density(TanhDrift{3.0, 0.0}, s, 1e4);
  EXPECT_TRUE(std::isfinite(f));
  EXPECT_GE(f, 0.0);
  EXPECT_TRUE(std::isfinite(an::log_fpt_density(TanhDrift{3.0, 0.0}, 1.0, {0.0, 0.0}, 1e4)));
}

TEST(Analytics, DomainErrors) {
  EXPECT_THROW(validate(TanhDrift{0.0, 0.0}), ValidationError);
  EXPECT_THROW(validate(TanhDrift{-1.0, 0.0}), ValidationError);
  EXPECT_THROW(validate(BmDrift{NAN}), ValidationError);
  EXPECT_THROW(validate(Taboo{1.0}, BarrierSetup{1.0, 0.0, 0.0}), ValidationError);
  EXPECT_THROW(validate(BmDrift{0.0}, BarrierSetup{1.0, 1.5, 0.0}), ValidationError);
  EXPECT_THROW(an::survival_to_T(TanhDrift{-1.0, 0.0}, {1.0, 0.0, 0.0}, 1.0), ValidationError);
  EXPECT_THROW(an::propagator_free(BmDrift{0.0}, {0.0, 1.0}, {0.0, 1.0}), DomainError);
  EXPECT_THROW(an::fpt_density(BmDrift{0.0}, {1.0, 1.0, 0.0}, 1.0), DomainError);
}

TEST(Analytics, LogDerivativesMatchFiniteDifferences) {
  const double h = 1e-6;
  for (const DriftModel& m :
       {DriftModel{BmDrift{-0.4}}, DriftModel{TanhDrift{1.2, 0.3}}, DriftModel{Taboo{1.8}}}) {
    const SpaceTimePoint from{0.1, 0.0};
    const SpaceTimePoint to{-0.4, 0.9};
    const double fd = (an::log_propagator_absorbed(m, 1.0, {from.x + h, 0.0}, to) -
                       an::log_propagator_absorbed(m, 1.0, {from.x - h, 0.0}, to)) /
                      (2 * h);
    EXPECT_NEAR(an::propagator_absorbed_dlog_dfrom(m, 1.0, from, to), fd, 1e-7) << describe(m);
    const double fd2 = (an::log_fpt_density(m, 1.0, {from.x + h, 0.0}, 0.9) -
                        an::log_fpt_density(m, 1.0, {from.x - h, 0.0}, 0.9)) /
                       (2 * h);
    EXPECT_NEAR(an::fpt_density_dlog_dstart(m, 1.0, from, 0.9), fd2, 1e-7) << describe(m);
  }
}
