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

#include <set>

#include "abpred/abpred.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace abpred {
namespace {

using testing::Rng;
using P = SparsePoly<PrimeField>;

const PrimeField kF101(101);

UnlayeredAbp<PrimeField> diamond() {
  Ring<PrimeField> ring{kF101, 4};
  auto x = [&](std::size_t i) { return P::variable(ring, i); };
  // s=0 -> {a=2, b=3} -> t=1 with labels x1, x2 then x3, x4.
  return UnlayeredAbp<PrimeField>(ring, {0, 1, 2, 3},
                                  {{0, 2, x(0)}, {0, 3, x(1)}, {2, 1, x(2)}, {3, 1, x(3)}}, 0, 1);
}

TEST(PathSum, SingleEdge) {
  Ring<PrimeField> ring{kF101, 1};
  UnlayeredAbp<PrimeField> abp(ring, {0, 1}, {{0, 1, P::variable(ring, 0)}}, 0, 1);
  EXPECT_EQ(computed_polynomial(abp), P::variable(ring, 0));
}

TEST(PathSum, DiamondSumsBothPaths) {
  auto abp = diamond();
  EXPECT_EQ(computed_polynomial(abp), parse_poly(abp.ring(), "x1*x3 + x2*x4"));
  EXPECT_EQ(depth(abp), 2);
}

TEST(PathSum, DisconnectedPairIsZero) {
  auto abp = diamond();
  EXPECT_TRUE(path_sum(abp, 2, 3).is_zero());
}

TEST(PathSum, PowerSumAbpComputesPowerSum) {
  for (std::size_t n = 1; n <= 4; ++n) {
    auto abp = power_sum_abp(kF101, n, static_cast<std::uint32_t>(n));
    auto expected = power_sum_poly(kF101, n, static_cast<std::uint32_t>(n));
    EXPECT_EQ(computed_polynomial(abp), expected);
    EXPECT_EQ(brute_force_paths(abp.dag(), abp.source(), abp.sink()), expected);
  }
}

TEST(PathSum, MatchesPathEnumerationOnRandomAbps) {
  Rng rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    auto abp = testing::random_unlayered(kF101, rng, 3, testing::uniform(rng, 2, 10), 2);
    auto poly = computed_polynomial(abp);
    EXPECT_EQ(poly, brute_force_paths(abp, abp.source(), abp.sink()));
    auto x = testing::random_point(kF101, 3, rng);
    EXPECT_EQ(evaluate(poly, x), testing::enumerate_paths_at(abp, abp.source(), abp.sink(), x));
  }
}

TEST(FormalDegree, ChainOfVariablesHasDegreeK) {
  auto abp = power_sum_abp(kF101, 1, 5);
  EXPECT_EQ(abp_formal_degree(abp.dag()), 5);
  EXPECT_EQ(depth(abp.dag()), 5);
}

TEST(FormalDegree, ScalarEdgeAddsNothing) {
  Ring<PrimeField> ring{kF101, 1};
  UnlayeredAbp<PrimeField> abp(ring, {0, 2, 1}, {{0, 2, P::variable(ring, 0)}, {2, 1, P::constant(ring, 5)}}, 0, 1);
  EXPECT_EQ(formal_degree(abp, 2), 1);
  EXPECT_EQ(abp_formal_degree(abp), 1);
}

TEST(FormalDegree, CancellationLeavesAGap) {
  // s -> a -> t computes x1*x1; s -> b -> t computes (-x1)*x1. Sum is zero.
  Ring<PrimeField> ring{kF101, 1};
  auto x = P::variable(ring, 0);
  UnlayeredAbp<PrimeField> abp(ring, {0, 1, 2, 3},
                               {{0, 2, x}, {2, 1, x}, {0, 3, x.scaled(kF101.neg(1))}, {3, 1, x}}, 0, 1);
  EXPECT_EQ(abp_formal_degree(abp), 2);
  EXPECT_TRUE(computed_polynomial(abp).is_zero());
}

TEST(FormalDegree, BoundsTrueDegreeEverywhere) {
  Rng rng(12);
  for (int trial = 0; trial < 80; ++trial) {
    auto abp = testing::random_unlayered(kF101, rng, 2, testing::uniform(rng, 3, 10), 2);
    auto fdeg = formal_degrees(abp);
    auto prefix = path_sums_from(abp, abp.source());
    for (std::size_t i = 0; i < abp.vertex_count(); ++i) {
      ASSERT_TRUE(fdeg[i].has_value());
      EXPECT_LE(prefix[i].total_degree(), *fdeg[i]);
    }
  }
}

TEST(Depth, MatchesRelaxationOracle) {
  Rng rng(13);
  for (int trial = 0; trial < 80; ++trial) {
    auto abp = testing::random_unlayered(kF101, rng, 2, testing::uniform(rng, 3, 12), 1);
    auto oracle = testing::relaxation_vertex_depths(abp);
    auto depths = vertex_depths(abp);
    for (std::size_t i = 0; i < abp.vertex_count(); ++i) {
      EXPECT_EQ(*depths[i], oracle.at(abp.vertices()[i]));
    }
  }
}

TEST(Validate, WellFormedHasNoViolations) {
  EXPECT_TRUE(validate(diamond()).empty());
  EXPECT_TRUE(validate(power_sum_abp(kF101, 3, 3)).empty());
}

TEST(Validate, LabelAboveDegreeBound) {
  Ring<PrimeField> ring{kF101, 1};
  UnlayeredAbp<PrimeField> abp(ring, {0, 1}, {{0, 1, parse_poly(ring, "x1^2")}}, 0, 1, 1);
  EXPECT_EQ(validate(abp).size(), 1u);
}

TEST(Validate, EdgeSkippingALayer) {
  Ring<PrimeField> ring{kF101, 1};
  auto x = P::variable(ring, 0);
  LayeredAbp<PrimeField> abp(ring, {{0}, {2}, {1}}, {{0, 2, x}, {2, 1, x}, {0, 1, x}});
  auto problems = validate(abp);
  ASSERT_EQ(problems.size(), 1u);
  EXPECT_NE(problems[0].find("layer 1 to layer 3"), std::string::npos);
}

TEST(Validate, OffPathVertexAndCycle) {
  Ring<PrimeField> ring{kF101, 1};
  auto x = P::variable(ring, 0);
  UnlayeredAbp<PrimeField> stray(ring, {0, 1, 5}, {{0, 1, x}, {0, 5, x}}, 0, 1);
  EXPECT_EQ(validate(stray).size(), 1u);
  auto pruned = prune_off_path(stray);
  EXPECT_EQ(pruned.removed, std::vector<VertexId>{5});
  EXPECT_TRUE(validate(pruned.abp).empty());
  UnlayeredAbp<PrimeField> cyclic(ring, {0, 1, 2, 3}, {{0, 2, x}, {2, 3, x}, {3, 2, x}, {3, 1, x}}, 0, 1);
  EXPECT_FALSE(validate(cyclic).empty());
  EXPECT_THROW(computed_polynomial(cyclic), PreconditionError);
}

TEST(Validate, DuplicateIdsRejected) {
  Ring<PrimeField> ring{kF101, 1};
  EXPECT_THROW(UnlayeredAbp<PrimeField>(ring, {0, 1, 1}, {}, 0, 1), PreconditionError);
}

TEST(Normalize, DropsZeroLabelledEdges) {
  Ring<PrimeField> ring{kF101, 1};
  auto x = P::variable(ring, 0);
  UnlayeredAbp<PrimeField> abp(ring, {0, 1}, {{0, 1, x}, {0, 1, P(ring)}}, 0, 1);
  EXPECT_EQ(normalized(abp).edge_count(), 1u);
  EXPECT_EQ(computed_polynomial(normalized(abp)), computed_polynomial(abp));
}

TEST(Multilayered, SizeConventionAndPolynomial) {
  Rng rng(14);
  for (int trial = 0; trial < 60; ++trial) {
    auto abp = testing::random_multilayered(kF101, rng, 3, 14, 2);
    std::size_t expected = 2;
    std::size_t layers = 0;
    P sum(abp.ring());
    for (const auto& b : abp.branches()) {
      expected += b.size() - 2;
      layers = std::max(layers, b.layer_count());
      sum += computed_polynomial(b);
    }
    EXPECT_EQ(abp.size(), expected);
    EXPECT_EQ(abp.layer_count(), layers);
    EXPECT_EQ(abp.to_unlayered().vertex_count(), expected);
    EXPECT_EQ(computed_polynomial(abp), sum);
    EXPECT_EQ(computed_polynomial(abp.to_unlayered()), sum);
    EXPECT_TRUE(validate(abp).empty());
  }
}

TEST(Ledger, EmptyLedgerIsIdentity) {
  Ring<PrimeField> ring{kF101, 2};
  auto f = parse_poly(ring, "x1 + x2^2");
  EXPECT_EQ(apply_ledger(f, ErrorLedger<PrimeField>(ring)), f);
}

TEST(Ledger, SinglePairAddsProduct) {
  Ring<PrimeField> ring{kF101, 2};
  ErrorLedger<PrimeField> ledger(ring);
  EXPECT_TRUE(ledger.add_pair(P::variable(ring, 0), P::variable(ring, 1)));
  EXPECT_FALSE(ledger.add_pair(P(ring), P::variable(ring, 1)));
  EXPECT_EQ(ledger.size(), 1u);
  auto f = parse_poly(ring, "x1 + 3");
  EXPECT_EQ(apply_ledger(f, ledger), parse_poly(ring, "x1 + 3 + x1*x2"));
}

TEST(Ledger, JsonRoundTrip) {
  Ring<PrimeField> ring{kF101, 2};
  ErrorLedger<PrimeField> ledger(ring);
  ledger.add_pair(parse_poly(ring, "x1 + x2"), parse_poly(ring, "x2^2"));
  ledger.add_constant(17);
  ledger.add_remainder(parse_poly(ring, "x1"), 1);
  auto back = ledger_from_json(ring, ledger_to_json(ledger));
  auto f = parse_poly(ring, "x1*x2");
  EXPECT_EQ(apply_ledger(f, back), apply_ledger(f, ledger));
  EXPECT_EQ(ledger_to_json(back), ledger_to_json(ledger));
}

}  // namespace
}  // namespace abpred
