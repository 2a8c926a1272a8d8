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

#include <cmath>

#include "abpred/abpred.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace abpred {
namespace {

using testing::Rng;
using P = SparsePoly<PrimeField>;

const PrimeField kF101(101);

Digraph chain_graph(std::size_t hops) {
  Digraph g{hops + 1, {}};
  for (std::size_t i = 0; i < hops; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

TEST(CutVertex, DiamondMatchesHandExpansion) {
  Ring<PrimeField> ring{kF101, 2};
  UnlayeredAbp<PrimeField> abp(ring, {0, 5, 1}, {{0, 5, parse_poly(ring, "x1 + 1")}, {5, 1, parse_poly(ring, "x2 + 3")}},
                               0, 1, 1);
  auto cut = cut_vertex(abp, 5);
  EXPECT_EQ(cut.alpha, 1u);
  EXPECT_EQ(cut.beta, 3u);
  EXPECT_EQ(cut.in_copy, 5u);
  EXPECT_EQ(cut.out_copy, abp.next_free_id());
  EXPECT_EQ(computed_polynomial(cut.abp), parse_poly(ring, "3*x1 + x2 + 6"));
  EXPECT_EQ(cut.ledger.delta(), kF101.neg(3));
  EXPECT_EQ(apply_ledger(computed_polynomial(cut.abp), cut.ledger), computed_polynomial(abp));
}

TEST(CutVertex, EndpointsRejected) {
  Ring<PrimeField> ring{kF101, 1};
  UnlayeredAbp<PrimeField> abp(ring, {0, 1}, {{0, 1, parse_poly(ring, "x1")}}, 0, 1, 1);
  EXPECT_THROW(cut_vertex(abp, 0), PreconditionError);
  EXPECT_THROW(cut_vertex(abp, 1), PreconditionError);
}

TEST(CutVertex, RandomUnlayeredReconstructs) {
  Rng rng(31);
  for (int trial = 0; trial < 80; ++trial) {
    auto abp = testing::random_unlayered(kF101, rng, 3, testing::uniform(rng, 4, 10), 2);
    for (VertexId v : abp.vertices()) {
      if (v == abp.source() || v == abp.sink()) continue;
      auto cut = cut_vertex(abp, v);
      EXPECT_EQ(cut.abp.vertex_count(), abp.vertex_count() + 1);
      EXPECT_EQ(cut.abp.edge_count(), abp.edge_count() + 2);
      EXPECT_LE(cut.ledger.size(), 1u);
      EXPECT_EQ(apply_ledger(computed_polynomial(cut.abp), cut.ledger), computed_polynomial(abp));
      EXPECT_TRUE(validate(cut.abp).empty());
    }
  }
}

TEST(ValiantEdgeSet, ChainPicksTwoSmallestClasses) {
  auto r = valiant_edge_set(chain_graph(7), 16);
  EXPECT_EQ(r.padded_depth, 8);
  EXPECT_EQ(r.bits, 3u);
  EXPECT_EQ(r.class_sizes, (std::vector<std::size_t>{4, 2, 1}));
  EXPECT_EQ(r.removed_classes, (std::pair<unsigned, unsigned>{1, 2}));
  EXPECT_EQ(r.removed_edges, (std::vector<std::size_t>{1, 3, 5}));
  EXPECT_EQ(r.depth_after, 1);
  EXPECT_TRUE(r.ok());
}

TEST(ValiantEdgeSet, TiesGoToLowerBit) {
  // Depth 3: classes bit0 = {0-1, 2-3}, bit1 = {1-2}; two classes, both removed.
  auto r = valiant_edge_set(chain_graph(3), 9);
  EXPECT_EQ(r.removed_classes, (std::pair<unsigned, unsigned>{0, 1}));
  EXPECT_EQ(r.depth_after, 0);
}

TEST(ValiantEdgeSet, ShallowGraphRejected) {
  EXPECT_THROW(valiant_edge_set(chain_graph(3), 16), PreconditionError);
  EXPECT_THROW(valiant_edge_set(chain_graph(30), 2), PreconditionError);
}

TEST(ValiantEdgeSet, CycleRejected) {
  Digraph g{3, {{0, 1}, {1, 2}, {2, 0}}};
  EXPECT_THROW(valiant_edge_set(g, 4), PreconditionError);
}

class ValiantProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ValiantProperty, HalvesDepthWithinSizeBound) {
  Rng rng(GetParam());
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t v = testing::uniform(rng, 12, 80);
    auto g = testing::random_deep_dag(rng, v, 8, 0.08);
    const double n = static_cast<double>(testing::uniform(rng, 4, 64));
    auto r = valiant_edge_set(g, n);
    EXPECT_EQ(r.depth, testing::relaxation_depth(g));
    std::vector<bool> skip(g.edges.size(), false);
    for (std::size_t e : r.removed_edges) skip[e] = true;
    const auto oracle_after = testing::relaxation_depth(g, skip);
    EXPECT_EQ(r.depth_after, oracle_after);
    EXPECT_LE(2 * oracle_after, r.depth);
    EXPECT_LE(static_cast<double>(r.removed_edges.size()), 4.0 * static_cast<double>(g.edges.size()) / std::log2(n));
    EXPECT_TRUE(r.labeling_valid);
    EXPECT_TRUE(r.relabeling_valid);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ValiantProperty, ::testing::Values(101u, 102u, 103u));

TEST(MiddleBand, RandomGraphsStayInBandAndCutDepth) {
  Rng rng(32);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t v = testing::uniform(rng, 20, 120);
    auto g = testing::random_deep_dag(rng, v, 18, 0.05);
    const double n = static_cast<double>(testing::uniform(rng, 4, 100));
    auto mb = middle_band_vertex_set(g, n);
    auto depths = longest_path_depths(g);
    const std::int64_t d = mb.depth;
    for (std::size_t u : mb.vertices) {
      EXPECT_GT(9 * depths[u], d);
      EXPECT_LT(9 * depths[u], 8 * d);
    }
    std::vector<bool> skip(g.vertex_count, false);
    for (std::size_t u : mb.vertices) skip[u] = true;
    const auto residual = testing::relaxation_depth(g, {}, skip);
    EXPECT_EQ(mb.residual_depth, residual);
    EXPECT_LE(18 * residual, 13 * d + 18);
    if (d >= 36) {
      EXPECT_LE(4 * residual, 3 * d);
    }
    EXPECT_LE(static_cast<double>(mb.vertices.size()), mb.removal.size_bound);
    EXPECT_EQ(mb.shallow_edges + mb.deep_edges + mb.kept_edges.size(), mb.removal.removed_edges.size());
    EXPECT_TRUE(mb.ok());
  }
}

TEST(DepthReduceOnce, ReconstructsAndMeetsExactBound) {
  Rng rng(33);
  for (int trial = 0; trial < 25; ++trial) {
    auto abp = testing::random_deep_abp(kF101, rng, 2, testing::uniform(rng, 12, 28), 8, 0.1);
    auto round = depth_reduce_once(abp, 16);
    const auto& step = round.report.steps.front();
    EXPECT_TRUE(step.extra.at("exact_depth_bound_ok").get<bool>());
    EXPECT_EQ(round.abp.vertex_count(), abp.vertex_count() + round.cut_vertices.size());
    EXPECT_EQ(round.abp.edge_count(), abp.edge_count() + 2 * round.cut_vertices.size());
    EXPECT_LE(round.ledger.size(), round.cut_vertices.size());
    EXPECT_TRUE(std::is_sorted(round.cut_vertices.begin(), round.cut_vertices.end()));
    EXPECT_EQ(apply_ledger(computed_polynomial(round.abp), round.ledger), computed_polynomial(abp));
  }
}

TEST(DepthReduceOnce, DeepChainMeetsNineTenths) {
  // Depth-120 chain of scalar and variable edges.
  Ring<PrimeField> ring{kF101, 2};
  std::vector<VertexId> ids;
  std::vector<Edge<PrimeField>> edges;
  for (VertexId i = 0; i <= 120; ++i) ids.push_back(i == 120 ? 1 : (i == 0 ? 0 : i + 1));
  for (std::size_t i = 0; i < 120; ++i) {
    edges.push_back({ids[i], ids[i + 1], i % 40 == 0 ? P::variable(ring, (i / 40) % 2) : P::constant(ring, 1)});
  }
  UnlayeredAbp<PrimeField> abp(ring, ids, edges, 0, 1, 1);
  auto round = depth_reduce_once(abp, 16);
  const auto& step = round.report.steps.front();
  EXPECT_TRUE(step.extra.at("depth_ratio_applicable").get<bool>());
  EXPECT_TRUE(step.extra.at("depth_ratio_ok").get<bool>());
  EXPECT_LE(10 * depth(round.abp), 9 * depth(abp));
  EXPECT_EQ(apply_ledger(computed_polynomial(round.abp), round.ledger), computed_polynomial(abp));
}

TEST(DepthReduceFull, ChainStopsAtTarget) {
  Ring<PrimeField> ring{kF101, 2};
  std::vector<VertexId> ids{0};
  std::vector<Edge<PrimeField>> edges;
  for (VertexId i = 1; i < 64; ++i) ids.push_back(i + 1);
  ids.push_back(1);
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
    edges.push_back({ids[i], ids[i + 1], i % 16 == 3 ? P::variable(ring, i % 2) : P::constant(ring, 2)});
  }
  UnlayeredAbp<PrimeField> abp(ring, ids, edges, 0, 1, 1);
  auto r = depth_reduce_full(abp, 16, 1);
  EXPECT_FALSE(r.report.steps.empty());
  EXPECT_FALSE(r.report.notes.empty());
  EXPECT_LT(depth(r.abp), depth(abp));
  for (const auto& step : r.report.steps) EXPECT_LT(step.measure_after, step.measure_before);
  EXPECT_EQ(apply_ledger(computed_polynomial(r.abp), r.ledger), computed_polynomial(abp));
}

TEST(DepthReduceFull, ShallowInputIsUnchanged) {
  auto abp = power_sum_abp(kF101, 4, 2).dag();
  auto r = depth_reduce_full(abp, 16, 1);
  EXPECT_TRUE(r.report.steps.empty());
  EXPECT_EQ(r.ledger.size(), 0u);
  EXPECT_EQ(r.abp, abp);
}

TEST(DepthReduceFull, BadParametersRejected) {
  auto abp = power_sum_abp(kF101, 4, 2).dag();
  EXPECT_THROW(depth_reduce_full(abp, 3, 1), PreconditionError);
  EXPECT_THROW(depth_reduce_full(abp, 16, 0), PreconditionError);
}

TEST(DepthReduceFull, RandomDeepReconstructs) {
  Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    auto abp = testing::random_deep_abp(kF101, rng, 2, testing::uniform(rng, 16, 30), 10, 0.08);
    auto r = depth_reduce_full(abp, 16, 1);
    EXPECT_LE(r.report.summary.at("iterations").get<std::size_t>(), r.report.summary.at("iteration_cap").get<std::size_t>());
    EXPECT_EQ(apply_ledger(computed_polynomial(r.abp), r.ledger), computed_polynomial(abp));
  }
}

}  // namespace
}  // namespace abpred
