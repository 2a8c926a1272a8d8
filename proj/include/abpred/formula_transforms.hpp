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

#pragma once

/**
 * @file formula_transforms.hpp
 * @brief Formal-degree reduction for formulas.
 *
 * find_band_vertex walks down from the root towards the child of largest
 * formal degree and stops at the first node of formal degree below 2t; that
 * node has formal degree in [t, 2t-1]. A product gate of fan-in above 2 can
 * have all children below t; the walk then groups its leftmost children
 * under a new product node whose formal degree lands in [t, 2t-2]. Grouping
 * changes neither the polynomial nor the leaves.
 *
 * decompose_formula repeatedly extracts such a node v: writing the formula as
 * h*g' + f with g' the polynomial at v, and g' = g + alpha, h = h0 + beta with
 * g, h0 constant-free,
 *
 *     h*g' + f = g*h0 + beta*g' + (alpha*h + f) - alpha*beta,
 *
 * where alpha*h + f is the formula with v replaced by the scalar alpha. The
 * pieces beta*g' are summed into the output formula.
 */

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "abpred/formula.hpp"
#include "abpred/ledger.hpp"

namespace abpred {

/// Node of formal degree in [t, 2t-1]. Requires t >= 1 and fdeg(f) >= 2t.
/// Ties between children go to the leftmost one. May regroup the children of
/// one product gate in place (see the file comment); other node ids persist.
template <Field F>
NodeId find_band_vertex(Formula<F>& f, Degree t) {
  if (t < 1) throw PreconditionError("band threshold t must be at least 1");
  auto fdeg = formal_degrees(f);
  NodeId cur = f.root();
  if (fdeg[cur] < 2 * t) {
    throw PreconditionError("formal degree " + std::to_string(fdeg[cur]) + " is below 2t = " + std::to_string(2 * t));
  }
  while (fdeg[cur] >= 2 * t) {
    const auto kids = f.node(cur).children;
    NodeId best = kids.front();
    for (NodeId c : kids) {
      if (fdeg[c] > fdeg[best]) best = c;
    }
    if (fdeg[best] >= t) {
      cur = best;
      continue;
    }
    // Product gate with every child below t: partial sums rise in steps
    // below t, so the first one reaching t is at most 2t-2 < fdeg(cur).
    std::vector<NodeId> group;
    Degree sum = 0;
    std::size_t i = 0;
    while (sum < t) {
      sum += fdeg[kids[i]];
      group.push_back(kids[i++]);
    }
    NodeId grouped = f.add_times(std::move(group));
    std::vector<NodeId> rest{grouped};
    rest.insert(rest.end(), kids.begin() + static_cast<std::ptrdiff_t>(i), kids.end());
    f.set_children(cur, std::move(rest));
    return grouped;
  }
  return cur;
}

template <Field F>
struct VertexSplit {
  SparsePoly<F> coefficient;  // h: the formula is h * [node] + rest
  SparsePoly<F> rest;         // f
  SparsePoly<F> node_value;   // polynomial at the node
  std::size_t node_size = 0;
  std::size_t residual_size = 0;  // variable leaves once the node is a scalar leaf
};

namespace detail {

// (coefficient of y, part free of y) where the node `marked` is replaced by y.
template <Field F>
std::pair<SparsePoly<F>, SparsePoly<F>> split_pair(const Formula<F>& f, NodeId node, NodeId marked,
                                                   const std::vector<SparsePoly<F>>& value) {
  const auto& ring = f.ring();
  if (node == marked) return {SparsePoly<F>::one(ring), SparsePoly<F>(ring)};
  const auto& n = f.node(node);
  if (n.children.empty()) return {SparsePoly<F>(ring), value[node]};
  // Only one child can contain the marked node.
  std::size_t holder = n.children.size();
  std::vector<NodeId> below = preorder(f, node);
  if (std::find(below.begin(), below.end(), marked) == below.end()) return {SparsePoly<F>(ring), value[node]};
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    auto sub = preorder(f, n.children[i]);
    if (std::find(sub.begin(), sub.end(), marked) != sub.end()) {
      holder = i;
      break;
    }
  }
  auto [hy, h0] = split_pair(f, n.children[holder], marked, value);
  if (n.kind == NodeKind::kPlus) {
    SparsePoly<F> rest = h0;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i != holder) rest += value[n.children[i]];
    }
    return {std::move(hy), std::move(rest)};
  }
  SparsePoly<F> others = SparsePoly<F>::one(ring);
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i != holder) others = others * value[n.children[i]];
  }
  return {hy * others, h0 * others};
}

}  // namespace detail

/// Writes the formula as h * (polynomial at `node`) + f, exactly.
template <Field F>
VertexSplit<F> split_at_vertex(const Formula<F>& f, NodeId node) {
  auto order = preorder(f);
  if (std::find(order.begin(), order.end(), node) == order.end()) {
    throw PreconditionError("node " + std::to_string(node) + " is not part of the formula");
  }
  auto value = expand_all(f);
  auto [h, rest] = detail::split_pair(f, f.root(), node, value);
  VertexSplit<F> out{std::move(h), std::move(rest), value[node], formula_size(f, node), 0};
  out.residual_size = formula_size(f) - out.node_size;
  return out;
}

template <Field F>
struct FormulaDecomposition {
  Formula<F> reduced;  // the output formula
  ErrorLedger<F> ledger;
  Degree degree_bound = 0;  // d
  Degree threshold = 0;     // floor(d/3)
  std::size_t input_size = 0;
  std::size_t pair_count = 0;  // k
  /// Per extraction, in order: the node id in the input formula, its formal
  /// degree, and the ids of its variable leaves in the input formula.
  std::vector<NodeId> extracted;
  std::vector<Degree> extracted_formal_degree;
  std::vector<std::vector<NodeId>> extracted_leaves;
  std::vector<Degree> pair_degrees;  // true degree of each recorded g
  bool disjoint = true;
};

/// Splits f into a formula of formal degree at most 2*floor(d/3), pairs
/// (g_i, h_i) and a scalar c with f = reduced + sum g_i h_i + c. `degree_bound`
/// defaults to fdeg(f) and must not be below it. For d < 3 the decomposition
/// is the identity.
template <Field F>
FormulaDecomposition<F> decompose_formula(const Formula<F>& f, std::optional<Degree> degree_bound = std::nullopt) {
  const Degree fdeg0 = formal_degree(f);
  const Degree d = degree_bound.value_or(fdeg0);
  if (d < fdeg0) throw PreconditionError("degree bound is below the formula's formal degree");
  const auto& ring = f.ring();
  const F& field = ring.field;
  FormulaDecomposition<F> out{compacted(f), ErrorLedger<F>(ring), d, d / 3, formula_size(f), 0, {}, {}, {}, {}, true};
  if (d < 3) return out;
  const Degree t = d / 3;

  Formula<F> current = f;
  std::vector<Formula<F>> pieces;
  std::set<NodeId> used_leaves;
  while (formal_degree(current) > 2 * t) {
    NodeId v = find_band_vertex(current, t);
    auto split = split_at_vertex(current, v);
    auto [alpha, g] = split_constant(split.node_value);
    auto [beta, h] = split_constant(split.coefficient);

    out.extracted.push_back(v);
    out.extracted_formal_degree.push_back(formal_degrees(current)[v]);
    auto leaves = variable_leaves(current, v);
    for (NodeId leaf : leaves) {
      if (!used_leaves.insert(leaf).second) out.disjoint = false;
    }
    out.extracted_leaves.push_back(std::move(leaves));

    if (!field.is_zero(beta)) {
      pieces.push_back(Formula<F>::product(ring, {Formula<F>::constant(ring, beta), subtree(current, v)}));
    }
    const Degree g_degree = g.total_degree();
    if (out.ledger.add_pair(std::move(g), std::move(h))) out.pair_degrees.push_back(g_degree);
    out.ledger.add_constant(field.neg(field.mul(alpha, beta)));
    current.make_constant(v, alpha);
  }
  out.pair_count = out.ledger.size();
  pieces.push_back(compacted(current));
  out.reduced = Formula<F>::sum(ring, pieces);
  return out;
}

template <Field F>
struct FormulaReduction {
  Formula<F> formula;
  ErrorLedger<F> ledger;
  TransformReport report;
};

/// Repeats decompose_formula until the formal degree is at most `target`.
template <Field F>
FormulaReduction<F> reduce_formula_degree(const Formula<F>& f, Degree target) {
  if (target < 1) throw PreconditionError("target formal degree must be at least 1");
  FormulaReduction<F> state{compacted(f), ErrorLedger<F>(f.ring()),
                            TransformReport{"reduce-formula-degree", "formal_degree", {}, {}, {}}};
  const Degree d_in = formal_degree(f);
  while (formal_degree(state.formula) > target) {
    const Degree d = formal_degree(state.formula);
    if (d < 3) {
      state.report.notes.push_back("stopped at formal degree " + std::to_string(d) +
                                   ": decomposition needs formal degree at least 3");
      break;
    }
    auto dec = decompose_formula(state.formula);
    const double tau = static_cast<double>(formula_size(state.formula));
    const Degree after = formal_degree(dec.reduced);
    StepRecord step;
    step.measure_before = d;
    step.measure_after = after;
    step.size_before = static_cast<std::int64_t>(formula_size(state.formula));
    step.size_after = static_cast<std::int64_t>(formula_size(dec.reduced));
    step.edges_before = static_cast<std::int64_t>(total_leaves(state.formula));
    step.edges_after = static_cast<std::int64_t>(total_leaves(dec.reduced));
    step.ledger_added = static_cast<std::int64_t>(dec.pair_count);
    const double pair_bound = tau / static_cast<double>(d / 3);
    step.extra = {{"threshold", d / 3},
                  {"extractions", dec.extracted.size()},
                  {"pair_bound", pair_bound},
                  {"pair_bound_ok", static_cast<double>(dec.pair_count) <= pair_bound},
                  {"two_thirds_ok", 3 * after <= 2 * d},
                  {"disjoint", dec.disjoint}};
    state.report.steps.push_back(std::move(step));
    state.formula = std::move(dec.reduced);
    state.ledger.append(dec.ledger);
  }
  state.report.summary = {{"target", target},
                          {"formal_degree_in", d_in},
                          {"formal_degree_out", formal_degree(state.formula)},
                          {"size_in", formula_size(f)},
                          {"size_out", formula_size(state.formula)},
                          {"ledger_size", state.ledger.size()},
                          {"reached_target", formal_degree(state.formula) <= target}};
  return state;
}

}  // namespace abpred
