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
 * @file unlayered_transforms.hpp
 * @brief Vertex cuts and depth reduction on unlayered ABPs.
 *
 * cut_vertex(A, v) splits v into an in-copy (keeps v's id and in-edges, gets a
 * single edge to t labeled beta) and an out-copy (fresh id, keeps v's
 * out-edges, gets a single edge from s labeled alpha), where alpha and beta
 * are the constant terms of [s,v] and [v,t]. The result computes
 * F - P*Q + alpha*beta with P = [s,v] - alpha and Q = [v,t] - beta.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "abpred/abp.hpp"
#include "abpred/digraph.hpp"
#include "abpred/ledger.hpp"

namespace abpred {

template <Field F>
struct VertexCut {
  UnlayeredAbp<F> abp;
  ErrorLedger<F> ledger;
  typename F::Element alpha;
  typename F::Element beta;
  VertexId in_copy;
  VertexId out_copy;
};

template <Field F>
VertexCut<F> cut_vertex(const UnlayeredAbp<F>& abp, VertexId v) {
  if (v == abp.source() || v == abp.sink()) {
    throw PreconditionError("cannot cut the start or end vertex (" + std::to_string(v) + ")");
  }
  const auto& ring = abp.ring();
  const F& field = ring.field;
  auto [alpha, p] = split_constant(path_sum(abp, abp.source(), v));
  auto [beta, q] = split_constant(path_sum(abp, v, abp.sink()));

  const VertexId out_copy = abp.next_free_id();
  std::vector<VertexId> vertices = abp.vertices();
  vertices.push_back(out_copy);
  std::vector<Edge<F>> edges;
  edges.reserve(abp.edge_count() + 2);
  for (const auto& e : abp.edges()) {
    if (e.from == v) {
      edges.push_back(Edge<F>{out_copy, e.to, e.label});
    } else {
      edges.push_back(e);
    }
  }
  edges.push_back(Edge<F>{v, abp.sink(), SparsePoly<F>::constant(ring, beta)});
  edges.push_back(Edge<F>{abp.source(), out_copy, SparsePoly<F>::constant(ring, alpha)});

  ErrorLedger<F> ledger(ring);
  ledger.add_pair(std::move(p), std::move(q));
  ledger.add_constant(field.neg(field.mul(alpha, beta)));
  UnlayeredAbp<F> out(ring, std::move(vertices), std::move(edges), abp.source(), abp.sink(),
                      abp.label_degree_bound());
  return VertexCut<F>{std::move(out), std::move(ledger), alpha, beta, v, out_copy};
}

template <Field F>
struct UnlayeredReduction {
  UnlayeredAbp<F> abp;
  ErrorLedger<F> ledger;
  TransformReport report;
  std::vector<VertexId> cut_vertices;
  std::vector<std::pair<VertexId, VertexId>> removed_edges;  // the depth-halving set, by endpoint ids
};

/// One round: cut (in ascending id order) every vertex of the middle-band set
/// of the ABP's graph. Requires depth >= sqrt(n).
template <Field F>
UnlayeredReduction<F> depth_reduce_once(const UnlayeredAbp<F>& abp, double n) {
  Digraph g = digraph_of(abp);
  MiddleBand band = middle_band_vertex_set(g, n);
  const std::int64_t d = depth(abp);
  const auto depths = vertex_depths(abp);

  std::vector<VertexId> cut_ids;
  for (std::size_t u : band.vertices) cut_ids.push_back(abp.vertices()[u]);
  std::sort(cut_ids.begin(), cut_ids.end());

  UnlayeredReduction<F> out{abp, ErrorLedger<F>(abp.ring()), TransformReport{"depth-reduce-once", "depth", {}, {}, {}},
                            cut_ids, {}};
  for (std::size_t e : band.removal.removed_edges) {
    out.removed_edges.emplace_back(abp.vertices()[g.edges[e].first], abp.vertices()[g.edges[e].second]);
  }
  for (VertexId u : cut_ids) {
    auto cut = cut_vertex(out.abp, u);
    out.abp = std::move(cut.abp);
    out.ledger.append(cut.ledger);
  }

  // max{depth(A minus U), depth(u)+1, d-depth(u)+1}, all measured in A.
  // The first term is the longest path anywhere in A minus U, which also
  // covers A minus U having no s-t path at all.
  std::int64_t exact_bound = band.residual_depth;
  for (VertexId u : cut_ids) {
    std::int64_t du = depths[abp.index_of(u)].value_or(0);
    exact_bound = std::max({exact_bound, du + 1, d - du + 1});
  }

  const double m = static_cast<double>(abp.edge_count());
  const double tau = static_cast<double>(abp.vertex_count());
  const double log_n = std::log2(n);
  const std::int64_t d_after = depth(out.abp);
  const double vertex_bound = tau + 4.0 * m / log_n;
  const double edge_bound = m + 8.0 * m / log_n;

  StepRecord step;
  step.measure_before = d;
  step.measure_after = d_after;
  step.size_before = static_cast<std::int64_t>(abp.vertex_count());
  step.size_after = static_cast<std::int64_t>(out.abp.vertex_count());
  step.edges_before = static_cast<std::int64_t>(abp.edge_count());
  step.edges_after = static_cast<std::int64_t>(out.abp.edge_count());
  step.ledger_added = static_cast<std::int64_t>(out.ledger.size());
  step.extra = {
      {"cut_count", cut_ids.size()},
      {"vertex_bound", vertex_bound},
      {"edge_bound", edge_bound},
      {"vertex_bound_ok", static_cast<double>(out.abp.vertex_count()) <= vertex_bound},
      {"edge_bound_ok", static_cast<double>(out.abp.edge_count()) <= edge_bound},
      {"exact_depth_bound", exact_bound},
      {"exact_depth_bound_ok", d_after <= exact_bound},
      // 9d/10 follows from the band bounds once d >= 90.
      {"depth_ratio_applicable", d >= 90},
      {"depth_ratio_ok", 10 * d_after <= 9 * d},
      {"middle_band", band.to_json()},
  };
  out.report.steps.push_back(std::move(step));
  out.report.summary = {{"n", n}, {"depth_in", d}, {"depth_out", d_after}, {"ledger_size", out.ledger.size()}};
  return out;
}

/// Repeats depth_reduce_once while the depth is at least sqrt(n), above n/delta
/// and the iteration count is below ceil(7 (log log n + log delta)). Runs at
/// every size; the report records which analytic hypotheses held.
template <Field F>
UnlayeredReduction<F> depth_reduce_full(const UnlayeredAbp<F>& abp, double n, int delta) {
  if (n < 4) throw PreconditionError("ambient parameter n must be at least 4");
  if (delta < 1) throw PreconditionError("label degree bound must be at least 1");
  const double log_n = std::log2(n);
  const double loglog_plus = std::log2(log_n) + std::log2(static_cast<double>(delta));
  const auto max_iterations = static_cast<std::size_t>(std::ceil(7.0 * loglog_plus));
  const double m0 = static_cast<double>(abp.edge_count());
  const double uniform_bound = n * log_n / (500.0 * loglog_plus);
  const double target = n / static_cast<double>(delta);
  const std::int64_t d0 = depth(abp);

  UnlayeredReduction<F> state{abp, ErrorLedger<F>(abp.ring()),
                              TransformReport{"depth-reduce-unlayered", "depth", {}, {}, {}}, {}, {}};
  bool growth_ok = true;
  bool uniform_ok = true;
  std::size_t i = 0;
  while (i < max_iterations) {
    const std::int64_t d = depth(state.abp);
    if (static_cast<double>(d) * static_cast<double>(d) < n) {
      state.report.notes.push_back("stopped: depth " + std::to_string(d) + " is below sqrt(n)");
      break;
    }
    if (static_cast<double>(d) <= target) {
      state.report.notes.push_back("stopped: depth " + std::to_string(d) + " is at most n/delta");
      break;
    }
    auto round = depth_reduce_once(state.abp, n);
    ++i;
    auto step = round.report.steps.front();
    const double growth_bound = m0 * std::pow(1.0 + 8.0 / log_n, static_cast<double>(i));
    const bool step_growth_ok = static_cast<double>(round.abp.edge_count()) <= growth_bound;
    growth_ok = growth_ok && step_growth_ok;
    uniform_ok = uniform_ok && static_cast<double>(round.abp.edge_count()) <= uniform_bound;
    step.extra["iteration"] = i;
    step.extra["edge_growth_bound"] = growth_bound;
    step.extra["edge_growth_ok"] = step_growth_ok;
    step.extra["uniform_edge_bound"] = uniform_bound;
    state.abp = std::move(round.abp);
    state.ledger.append(round.ledger);
    state.cut_vertices.insert(state.cut_vertices.end(), round.cut_vertices.begin(), round.cut_vertices.end());
    state.report.steps.push_back(std::move(step));
    if (round.cut_vertices.empty()) {
      state.report.notes.push_back("stopped: no vertex in the middle band, depth cannot decrease further");
      break;
    }
  }
  if (i == max_iterations) state.report.notes.push_back("stopped: iteration cap reached");

  const double edge_hypothesis = n * log_n / (1000.0 * loglog_plus);
  const std::int64_t d_final = depth(state.abp);
  state.report.summary = {
      {"n", n},
      {"delta", delta},
      {"iteration_cap", max_iterations},
      {"iterations", i},
      {"depth_in", d0},
      {"depth_out", d_final},
      {"depth_target", target},
      {"depth_target_reached", static_cast<double>(d_final) <= target},
      {"edges_in", abp.edge_count()},
      {"edges_out", state.abp.edge_count()},
      {"edge_growth_ok", growth_ok},
      {"uniform_edge_bound", uniform_bound},
      {"uniform_edge_bound_ok", uniform_ok},
      {"ledger_size", state.ledger.size()},
      {"ledger_bound", n / 10.0},
      {"ledger_bound_ok", static_cast<double>(state.ledger.size()) <= n / 10.0},
      {"vertices_added", state.abp.vertex_count() - abp.vertex_count()},
      {"hypotheses",
       {{"depth_at_least_sqrt_n", static_cast<double>(d0) * static_cast<double>(d0) >= n},
        {"edges_at_most_n_log_n_over_1000", m0 <= edge_hypothesis},
        {"edge_hypothesis_bound", edge_hypothesis}}},
  };
  return state;
}

}  // namespace abpred
