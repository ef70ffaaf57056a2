#include <gtest/gtest.h>

#include "invariants.hpp"

namespace ft = fptlab::testing;

namespace {
void expect_pass(const ft::InvariantResult& r) {
  EXPECT_TRUE(r.pass()) << r.name << ": worst " << r.worst << " > " << r.tolerance;
}
}  // namespace

TEST(AnalyticInvariants, FptDensityNormalizesToAbsorption) { expect_pass(ft::normalization()); }
TEST(AnalyticInvariants, FptIsHalfFluxAtBarrier) { expect_pass(ft::derivative_identity()); }
TEST(AnalyticInvariants, MassBalance) { expect_pass(ft::mass_balance()); }
TEST(AnalyticInvariants, ChapmanKolmogorov) { expect_pass(ft::chapman_kolmogorov()); }
TEST(AnalyticInvariants, ReductionToDriftlessBm) { expect_pass(ft::reduction_chain()); }
TEST(AnalyticInvariants, GirsanovWeightAlongPaths) { expect_pass(ft::girsanov_pathwise()); }
