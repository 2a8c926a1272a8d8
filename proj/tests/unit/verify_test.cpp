// Copyright 2026 The abpred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include "abpred/abpred.hpp"
#include "support/generators.hpp"

namespace abpred {
namespace {

const PrimeField kF101(101);
const RationalField kQ;

TEST(SingularSupport, PairwiseEsymHasOnlyTheOrigin) {
  auto r = singular_support_esym(4, 2, 5);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.counters.at("points"), 625);
  EXPECT_EQ(r.counters.at("common_zeros"), 1);
  EXPECT_EQ(r.counters.at("required_zero_coordinates"), 4);
}

TEST(SingularSupport, CubicProductNeedsTwoZeros) {
  auto r = singular_support_esym(3, 3, 5);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.counters.at("common_zeros"), 13);  // origin plus 3 axes of 4 points
  EXPECT_EQ(r.counters.at("min_zero_coordinates"), 2);
}

TEST(SingularSupport, SweepOfSmallCases) {
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::size_t d = 2; d <= n; ++d) {
      for (std::uint64_t p : {5u, 7u}) {
        auto r = singular_support_esym(n, d, p);
        EXPECT_TRUE(r.pass) << n << " " << d << " " << p;
        EXPECT_EQ(r.counters.at("violations"), 0);
      }
    }
  }
}

TEST(SingularSupport, PreconditionsChecked) {
  EXPECT_THROW(singular_support_esym(4, 1, 5), PreconditionError);
  EXPECT_THROW(singular_support_esym(4, 5, 7), PreconditionError);
  EXPECT_THROW(singular_support_esym(4, 3, 3), PreconditionError);
  EXPECT_THROW(singular_support_esym(4, 2, 5, 100), BudgetExceeded);
}

TEST(SingularSupport, PerturbedModeNeverFails) {
  auto r = singular_support_esym_perturbed(3, 3, 5, 7);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.counters.contains("common_zeros"));
  EXPECT_EQ(r.to_json().at("params").at("seed"), 7);
}

TEST(PowerSumSingular, UnperturbedSystemHasOnlyTheOrigin) {
  Ring<RationalField> ring{kQ, 3};
  std::vector<SparsePoly<RationalField>> g(3, SparsePoly<RationalField>(ring));
  auto r = power_sum_singular_check(3, 3, g, {5, 7});
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.counters.at("common_zeros").at("5"), 1);
  EXPECT_EQ(r.counters.at("common_zeros").at("7"), 1);
  EXPECT_EQ(r.counters.at("bound"), 27);
}

TEST(PowerSumSingular, PerturbedSystemsStayBelowBound) {
  Ring<RationalField> ring{kQ, 2};
  testing::Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<SparsePoly<RationalField>> g;
    for (int i = 0; i < 2; ++i) g.push_back(testing::random_poly(ring, rng, 2, 4));
    auto r = power_sum_singular_check(2, 3, g, {5, 7, 11, 13});
    EXPECT_TRUE(r.pass);
  }
}

TEST(PowerSumSingular, DenominatorPrimeIsSkipped) {
  Ring<RationalField> ring{kQ, 1};
  std::vector<SparsePoly<RationalField>> g{parse_poly(ring, "1/5")};
  auto r = power_sum_singular_check(1, 2, g, {5, 7});
  EXPECT_EQ(r.warnings.size(), 2u);
  EXPECT_FALSE(r.counters.at("common_zeros").contains("5"));
}

TEST(PowerSumSingular, BadPerturbationRejected) {
  Ring<RationalField> ring{kQ, 2};
  std::vector<SparsePoly<RationalField>> g{parse_poly(ring, "x1^3"), SparsePoly<RationalField>(ring)};
  EXPECT_THROW(power_sum_singular_check(2, 3, g, {5}), PreconditionError);
  EXPECT_THROW(power_sum_singular_check(2, 3, {g[1]}, {5}), PreconditionError);
}

TEST(Euler, HoldsForHomogeneousPolynomials) {
  Ring<RationalField> ring{kQ, 2};
  auto r = euler_check(parse_poly(ring, "x1*x2"));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.degree, 2);
  EXPECT_FALSE(r.degenerate);
  EXPECT_TRUE(euler_check(esym_brute(kF101, 4, 3)).holds);
}

TEST(Euler, CharacteristicDividingDegreeIsDegenerate) {
  PrimeField f3(3);
  Ring<PrimeField> ring{f3, 1};
  auto r = euler_check(parse_poly(ring, "x1^3"));
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(r.degenerate);
}

TEST(Euler, InhomogeneousRejected) {
  Ring<RationalField> ring{kQ, 2};
  EXPECT_THROW(euler_check(parse_poly(ring, "x1*x2 + x1")), PreconditionError);
}

TEST(CheckLedger, AcceptsExactAndRejectsBroken) {
  Ring<PrimeField> ring{kF101, 2};
  auto f_out = parse_poly(ring, "x1 + 1");
  ErrorLedger<PrimeField> ledger(ring);
  ledger.add_pair(parse_poly(ring, "x1"), parse_poly(ring, "x2"));
  ledger.add_constant(4);
  auto f_in = parse_poly(ring, "x1*x2 + x1 + 5");
  EXPECT_TRUE(check_ledger(f_in, f_out, ledger, 1).pass);
  EXPECT_FALSE(check_ledger(parse_poly(ring, "x1*x2 + x1"), f_out, ledger, 1).pass);
  ledger.add_remainder(parse_poly(ring, "x2^2"), 2);
  auto r = check_ledger(parse_poly(ring, "x1*x2 + x1 + x2^2 + 5"), f_out, ledger, 1);
  EXPECT_FALSE(r.pass);
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_NE(r.failures[0].find("remainder degree"), std::string::npos);
}

TEST(BruteForcePaths, BudgetEnforced) {
  auto abp = power_sum_abp(kF101, 5, 3);
  EXPECT_EQ(brute_force_paths(abp.dag(), 0, 1, 5), power_sum_poly(kF101, 5, 3));
  EXPECT_THROW(brute_force_paths(abp.dag(), 0, 1, 4), BudgetExceeded);
}

}  // namespace
}  // namespace abpred
