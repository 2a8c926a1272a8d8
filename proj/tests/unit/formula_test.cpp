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
const Ring<PrimeField> kRing3{kF101, 3};

std::size_t parse_error_position(const std::string& text) {
  try {
    parse_formula(kRing3, text);
  } catch (const ParseError& e) {
    return e.position();
  }
  ADD_FAILURE() << "no parse error for " << text;
  return 0;
}

TEST(FormulaCore, ParseExpandAndMeasure) {
  auto f = parse_formula(kRing3, "((x1 * x2) + 3 + (x3 * (x1 + 5)))");
  EXPECT_EQ(expand(f), parse_poly(kRing3, "x1*x2 + x1*x3 + 5*x3 + 3"));
  EXPECT_EQ(formula_size(f), 4u);
  EXPECT_EQ(total_leaves(f), 6u);
  EXPECT_EQ(gate_count(f), 4u);
  EXPECT_EQ(formal_degree(f), 2);
  EXPECT_TRUE(validate(f).empty());
}

TEST(FormulaCore, FormalDegreeIgnoresCancellation) {
  auto f = parse_formula(kRing3, "((x1 * x1) + (-1 * x1 * x1))");
  EXPECT_TRUE(expand(f).is_zero());
  EXPECT_EQ(formal_degree(f), 2);
}

TEST(FormulaCore, ScalarTimesScalarHasDegreeZero) {
  auto f = parse_formula(kRing3, "(2 * 3)");
  EXPECT_EQ(formal_degree(f), 0);
  EXPECT_EQ(formula_size(f), 0u);
}

TEST(FormulaCore, SmallGatesRejected) {
  Formula<PrimeField> f(kRing3);
  NodeId x = f.add_variable(0);
  EXPECT_THROW(f.add_plus({x}), PreconditionError);
}

TEST(FormulaCore, RandomFormulasMatchEvaluationOracle) {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = testing::random_formula(kF101, rng, 3, 1, 8);
    auto p = expand(f);
    EXPECT_LE(p.total_degree(), formal_degree(f));
    for (int k = 0; k < 3; ++k) {
      auto point = testing::random_point(kF101, 3, rng);
      EXPECT_EQ(evaluate(p, point), testing::evaluate_formula_at(f, point));
    }
    EXPECT_TRUE(validate(f).empty());
    EXPECT_EQ(compacted(f), f);
  }
}

TEST(FormulaIo, TextRoundTrip) {
  Rng rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    auto f = testing::random_formula(kF101, rng, 3, 1, 8);
    auto g = parse_formula(kRing3, formula_to_text(f));
    EXPECT_EQ(g, f);
    EXPECT_EQ(formula_to_text(g), formula_to_text(f));
  }
}

TEST(FormulaIo, JsonRoundTrip) {
  Rng rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    auto f = testing::random_formula(kF101, rng, 3, 1, 8);
    auto j = formula_to_json(f);
    EXPECT_EQ(formula_from_json(kRing3, nlohmann::json::parse(j.dump())), f);
  }
}

TEST(FormulaIo, TextErrorsCarryPositions) {
  EXPECT_EQ(parse_error_position("(x1 + x2 * x3)"), 9u);
  EXPECT_EQ(parse_error_position("(x1)"), 0u);
  EXPECT_EQ(parse_error_position("(x1 + x4)"), 6u);
  EXPECT_EQ(parse_error_position("(x1 + x2"), 0u);
  EXPECT_EQ(parse_error_position("x1 x2"), 3u);
  EXPECT_EQ(parse_error_position("(x + 1)"), 1u);
  EXPECT_EQ(parse_error_position("(x1 + ?)"), 6u);
}

TEST(FormulaIo, JsonErrorsRejected) {
  using nlohmann::json;
  EXPECT_THROW(formula_from_json(kRing3, json{{"var", 0}}), ParseError);
  EXPECT_THROW(formula_from_json(kRing3, json{{"var", 4}}), ParseError);
  EXPECT_THROW(formula_from_json(kRing3, json{{"const", 5}}), ParseError);
  EXPECT_THROW(formula_from_json(kRing3, json{{"op", "-"}, {"children", json::array({json{{"var", 1}}, json{{"var", 2}}})}}),
               ParseError);
  EXPECT_THROW(formula_from_json(kRing3, json{{"op", "+"}, {"children", json::array({json{{"var", 1}}})}}), ParseError);
  EXPECT_THROW(formula_from_json(kRing3, json::array()), ParseError);
}

TEST(BandVertex, LandsInBand) {
  Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = testing::random_formula(kF101, rng, 3, 2, 12);
    const Degree d = formal_degree(f);
    for (Degree t = 1; 2 * t <= d; ++t) {
      auto g = f;
      NodeId v = find_band_vertex(g, t);
      const Degree fd = formal_degrees(g)[v];
      EXPECT_GE(fd, t);
      EXPECT_LE(fd, 2 * t - 1);
      EXPECT_EQ(expand(g), expand(f));
      EXPECT_EQ(formula_size(g), formula_size(f));
      EXPECT_TRUE(validate(g).empty());
    }
  }
}

TEST(BandVertex, WideProductIsRegrouped) {
  auto f = power_sum_formula(kF101, 1, 6);  // single 6-ary product
  NodeId v = find_band_vertex(f, 2);
  EXPECT_EQ(formal_degrees(f)[v], 2);
  EXPECT_EQ(formula_to_text(f), "((x1 * x1) * x1 * x1 * x1 * x1)");
}

TEST(BandVertex, BalancedProductOfFour) {
  auto f = parse_formula(kRing3, "((x1 * x2) * (x3 * x1))");
  NodeId v = find_band_vertex(f, 2);
  EXPECT_EQ(formal_degrees(f)[v], 2);
  EXPECT_EQ(formula_to_text(subtree(f, v)), "(x1 * x2)");
}

TEST(BandVertex, PreconditionsChecked) {
  auto f = parse_formula(kRing3, "(x1 * x2)");
  EXPECT_THROW(find_band_vertex(f, 0), PreconditionError);
  EXPECT_THROW(find_band_vertex(f, 2), PreconditionError);
  EXPECT_EQ(f.node(find_band_vertex(f, 1)).kind, NodeKind::kVariable);
}

TEST(SplitAtVertex, LinearInTheNode) {
  Rng rng(45);
  for (int trial = 0; trial < 60; ++trial) {
    auto f = testing::random_formula(kF101, rng, 3, 1, 8);
    for (NodeId v : preorder(f)) {
      auto split = split_at_vertex(f, v);
      EXPECT_EQ(split.coefficient * split.node_value + split.rest, expand(f));
      EXPECT_EQ(split.node_size + split.residual_size, formula_size(f));
    }
  }
}

void expect_valid_decomposition(const Formula<PrimeField>& f, const FormulaDecomposition<PrimeField>& dec) {
  const Degree d = dec.degree_bound;
  const Degree t = d / 3;
  EXPECT_EQ(apply_ledger(expand(dec.reduced), dec.ledger), expand(f));
  EXPECT_LE(formula_size(dec.reduced), formula_size(f));
  EXPECT_TRUE(dec.disjoint);
  EXPECT_TRUE(validate(dec.reduced).empty());
  if (d < 3) return;
  EXPECT_LE(formal_degree(dec.reduced), 2 * t);
  EXPECT_LE(dec.pair_count * static_cast<std::size_t>(t), formula_size(f));
  for (Degree fd : dec.extracted_formal_degree) {
    EXPECT_GE(fd, t);
    EXPECT_LE(fd, 2 * t - 1);
  }
  for (const auto& leaves : dec.extracted_leaves) EXPECT_GE(leaves.size(), static_cast<std::size_t>(t));
  for (const auto& pr : dec.ledger.pairs()) {
    EXPECT_EQ(pr.p.constant_term(), 0u);
    EXPECT_EQ(pr.q.constant_term(), 0u);
  }
}

TEST(DecomposeFormula, PowerSumSixth) {
  auto f = power_sum_formula(kF101, 3, 6);
  auto dec = decompose_formula(f);
  EXPECT_EQ(dec.threshold, 2);
  expect_valid_decomposition(f, dec);
  EXPECT_EQ(dec.pair_count, 3u);
  for (Degree pd : dec.pair_degrees) EXPECT_GE(pd, 2);
}

TEST(DecomposeFormula, LowDegreeIsIdentity) {
  auto f = parse_formula(kRing3, "((x1 * x2) + x3)");
  auto dec = decompose_formula(f);
  EXPECT_EQ(dec.reduced, f);
  EXPECT_EQ(dec.ledger.size(), 0u);
}

TEST(DecomposeFormula, BoundBelowFormalDegreeRejected) {
  auto f = power_sum_formula(kF101, 2, 4);
  EXPECT_THROW(decompose_formula(f, 3), PreconditionError);
  expect_valid_decomposition(f, decompose_formula(f, 9));
}

class DecomposeProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(DecomposeProperty, RandomFormulas) {
  Rng rng(GetParam());
  for (int trial = 0; trial < 50; ++trial) {
    auto f = testing::random_formula(kF101, rng, 3, 3, 14);
    expect_valid_decomposition(f, decompose_formula(f));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, DecomposeProperty, ::testing::Values(201u, 202u, 203u));

TEST(ReduceFormulaDegree, ReachesTargetAndReconstructs) {
  Rng rng(46);
  for (int trial = 0; trial < 40; ++trial) {
    auto f = testing::random_formula(kF101, rng, 3, 4, 16);
    auto r = reduce_formula_degree(f, 2);
    EXPECT_LE(formal_degree(r.formula), 2);
    EXPECT_EQ(apply_ledger(expand(r.formula), r.ledger), expand(f));
    for (const auto& step : r.report.steps) {
      EXPECT_LE(3 * step.measure_after, 2 * step.measure_before);
      EXPECT_TRUE(step.extra.at("pair_bound_ok").get<bool>());
    }
  }
}

TEST(ReduceFormulaDegree, TargetOneStopsWithNote) {
  auto f = power_sum_formula(kF101, 2, 2);
  auto r = reduce_formula_degree(f, 1);
  EXPECT_EQ(formal_degree(r.formula), 2);
  ASSERT_EQ(r.report.notes.size(), 1u);
  EXPECT_THROW(reduce_formula_degree(f, 0), PreconditionError);
}

}  // namespace
}  // namespace abpred
