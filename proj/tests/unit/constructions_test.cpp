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
#include "support/oracles.hpp"

namespace abpred {
namespace {

using testing::Rng;

const PrimeField kF101(101);
const RationalField kQ;

TEST(PowerSum, PolynomialFormulaAndAbpAgree) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::uint32_t k = 1; k <= 5; ++k) {
      auto p = power_sum_poly(kF101, n, k);
      EXPECT_EQ(p.term_count(), n);
      EXPECT_EQ(expand(power_sum_formula(kF101, n, k)), p);
      auto abp = power_sum_abp(kF101, n, k);
      EXPECT_EQ(computed_polynomial(abp), p);
      EXPECT_EQ(brute_force_paths(abp.dag(), abp.source(), abp.sink()), p);
      EXPECT_EQ(abp.layer_count(), k + 1);
      EXPECT_TRUE(validate(abp).empty());
    }
  }
}

TEST(PowerSum, SmallestCaseShape) {
  auto abp = power_sum_abp(kF101, 2, 2);
  EXPECT_EQ(abp.size(), 4u);
  EXPECT_EQ(abp.layer_width(2), 2u);
  EXPECT_EQ(to_text(computed_polynomial(abp)), "x1^2 + x2^2");
}

TEST(PowerSum, WiderLabelsShortenTheProgram) {
  auto abp = power_sum_abp(kF101, 3, 7, 3);
  EXPECT_EQ(abp.layer_count(), 4u);  // ceil(7/3) hops
  EXPECT_EQ(abp.label_degree_bound(), 3);
  EXPECT_EQ(computed_polynomial(abp), power_sum_poly(kF101, 3, 7));
  EXPECT_TRUE(validate(abp).empty());
}

TEST(PowerSum, BadParametersRejected) {
  EXPECT_THROW(power_sum_abp(kF101, 0, 2), PreconditionError);
  EXPECT_THROW(power_sum_abp(kF101, 2, 0), PreconditionError);
  EXPECT_THROW(power_sum_abp(kF101, 2, 2, 0), PreconditionError);
}

TEST(Esym, BruteForceMatchesRecurrenceOracle) {
  Rng rng(51);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t d = 0; d <= n + 1; ++d) {
      auto e = esym_brute(kF101, n, d);
      for (int k = 0; k < 4; ++k) {
        auto point = testing::random_point(kF101, n, rng);
        EXPECT_EQ(evaluate(e, point), testing::esym_at(kF101, point, d)) << n << " " << d;
      }
    }
  }
  EXPECT_EQ(esym_brute(kF101, 4, 2).term_count(), 6u);
  EXPECT_TRUE(esym_brute(kF101, 3, 4).is_zero());
  EXPECT_EQ(esym_brute(kF101, 3, 0), SparsePoly<PrimeField>::one(Ring<PrimeField>{kF101, 3}));
}

TEST(BenOr, MatchesBruteForceOverRationals) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t d = 0; d <= n; ++d) {
      auto f = esym_ben_or_formula(kQ, n, d);
      EXPECT_EQ(expand(f), esym_brute(kQ, n, d)) << n << " " << d;
      EXPECT_EQ(formula_size(f), n * (n + 1));
      EXPECT_TRUE(validate(f).empty());
    }
  }
}

TEST(BenOr, MatchesEvaluationOracleOverPrimeField) {
  Rng rng(52);
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::size_t d = 1; d <= n; ++d) {
      auto f = esym_ben_or_formula(kF101, n, d);
      for (int k = 0; k < 3; ++k) {
        auto point = testing::random_point(kF101, n, rng);
        EXPECT_EQ(testing::evaluate_formula_at(f, point), testing::esym_at(kF101, point, d));
      }
    }
  }
}

TEST(BenOr, CustomPointsAndSmallFields) {
  std::vector<PrimeField::Element> points{3, 5, 8, 13};
  auto f = esym_ben_or_formula(kF101, 3, 2, points);
  EXPECT_EQ(expand(f), esym_brute(kF101, 3, 2));
  EXPECT_THROW(esym_ben_or_formula(PrimeField(5), 5, 2), PreconditionError);
  EXPECT_THROW(esym_ben_or_formula(kF101, 3, 2, std::vector<PrimeField::Element>{1, 2, 3}), PreconditionError);
  EXPECT_THROW(esym_ben_or_formula(kF101, 3, 2, std::vector<PrimeField::Element>{1, 1, 2, 3}), Error);
  EXPECT_THROW(esym_ben_or_formula(kF101, 3, 4), PreconditionError);
}

TEST(EsymIdentities, DerivativeAndSummedIdentitiesHold) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t d = 1; d <= n; ++d) {
      EXPECT_TRUE(esym_derivative_identity_check(kQ, n, d).holds);
      EXPECT_TRUE(esym_derivative_identity_check(kF101, n, d).holds);
      EXPECT_TRUE(esym_summed_identity_check(kQ, n, d));
      EXPECT_TRUE(esym_summed_identity_check(PrimeField(3), n, d));
    }
  }
  EXPECT_THROW(esym_derivative_identity_check(kQ, 3, 0), PreconditionError);
  EXPECT_THROW(esym_summed_identity_check(kQ, 3, 4), PreconditionError);
}

}  // namespace
}  // namespace abpred
