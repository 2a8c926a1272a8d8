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
 * @file layered_transforms.hpp
 * @brief Depth reduction for layered and multilayered ABPs.
 *
 *  - decompose_by_band: P = sum_j [s,u_j] * Q_j + R over one formal-degree band.
 *  - remove_scalar_last_layer / remove_scalar_first_layer: absorb a layer whose
 *    edges to t (from s) are scalars into the neighbouring layer.
 *  - cut_at_layer: split a layered ABP at one layer into two shorter branches.
 *  - shrink_multilayered: one cut at the lightest layer of the middle third.
 *  - reduce_layers_below: iterate shrink_multilayered down to a target.
 *  - audit_degree_bands: vertex counts per formal-degree band.
 *
 * All transforms record the change of the computed polynomial in an
 * ErrorLedger so that apply_ledger(output, ledger) == input exactly.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "abpred/abp.hpp"
#include "abpred/ledger.hpp"

namespace abpred {

template <Field F>
struct BandDecomposition {
  Degree formal_degree = 0;
  std::size_t band = 0;
  /// Band vertices, ordered so no vertex reaches a later one.
  std::vector<VertexId> vertices;
  std::vector<SparsePoly<F>> prefixes;  // [s, u_j]
  std::vector<SparsePoly<F>> suffixes;  // Q_j
  SparsePoly<F> remainder;              // R
};

/// Splits the ABP's polynomial along the vertices whose formal degree lies in
/// [band * delta, (band + 1) * delta). Requires 1 <= band <= floor(d/delta) - 1
/// where d is the ABP's formal degree.
template <Field F>
BandDecomposition<F> decompose_by_band(const UnlayeredAbp<F>& abp, std::size_t band) {
  const Degree d = abp_formal_degree(abp);
  const Degree delta = abp.label_degree_bound();
  const Degree bands = d / delta;
  if (band < 1 || static_cast<Degree>(band) > bands - 1) {
    throw PreconditionError("band " + std::to_string(band) + " outside 1.." + std::to_string(bands - 1) +
                            " for formal degree " + std::to_string(d) + " and label degree bound " +
                            std::to_string(delta));
  }
  auto fdeg = formal_degrees(abp);
  auto topo = topological_order(abp);
  const Degree lo = static_cast<Degree>(band) * delta;
  const Degree hi = lo + delta;

  BandDecomposition<F> out{d, band, {}, {}, {}, SparsePoly<F>(abp.ring())};
  // Reverse topological order: later vertices cannot reach earlier ones.
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const auto& f = fdeg[abp.index_of(*it)];
    if (f && *f >= lo && *f < hi) out.vertices.push_back(*it);
  }
  auto prefix = path_sums_from(abp, abp.source());
  std::set<VertexId> removed;
  for (VertexId u : out.vertices) {
    UnlayeredAbp<F> reduced = without_vertices(abp, removed);
    out.prefixes.push_back(prefix[abp.index_of(u)]);
    out.suffixes.push_back(path_sum(reduced, u, abp.sink()));
    removed.insert(u);
  }
  out.remainder = computed_polynomial(without_vertices(abp, removed));
  return out;
}

template <Field F>
BandDecomposition<F> decompose_by_band(const LayeredAbp<F>& abp, std::size_t band) {
  return decompose_by_band(abp.dag(), band);
}

namespace detail {

// Sum of parallel edge labels between each ordered vertex pair.
template <Field F>
std::map<std::pair<VertexId, VertexId>, SparsePoly<F>> merged_labels(const std::vector<Edge<F>>& edges,
                                                                      const Ring<F>& ring) {
  std::map<std::pair<VertexId, VertexId>, SparsePoly<F>> out;
  for (const auto& e : edges) {
    auto [it, inserted] = out.try_emplace({e.from, e.to}, ring);
    it->second += e.label;
  }
  return out;
}

}  // namespace detail

/// Absorbs layer k (the last interior layer) of a (k+1)-layer ABP whose edges
/// into t are all scalars: each u in layer k-1 gets the single edge
/// u -> t labeled sum_i [v_i, t] * [u, v_i]. The polynomial is unchanged and
/// the size drops by exactly the width of layer k.
template <Field F>
LayeredAbp<F> remove_scalar_last_layer(const LayeredAbp<F>& abp) {
  const std::size_t d = abp.layer_count();
  if (d < 3) throw PreconditionError("removing the last interior layer needs at least three layers");
  const VertexId t = abp.sink();
  for (const auto& e : abp.edges()) {
    if (e.to == t && !e.label.is_constant()) {
      throw PreconditionError("edge " + std::to_string(e.from) + "->" + std::to_string(t) +
                              " into the end vertex is not scalar-labeled");
    }
  }
  const auto& removed_layer = abp.layer(d - 1);
  const auto& before = abp.layer(d - 2);
  std::unordered_set<VertexId> removed(removed_layer.begin(), removed_layer.end());
  auto labels = detail::merged_labels(abp.edges(), abp.ring());

  std::vector<Edge<F>> edges;
  for (const auto& e : abp.edges()) {
    if (!removed.contains(e.from) && !removed.contains(e.to)) edges.push_back(e);
  }
  const auto zero = SparsePoly<F>(abp.ring());
  auto label_of = [&](VertexId a, VertexId b) -> const SparsePoly<F>& {
    auto it = labels.find({a, b});
    return it == labels.end() ? zero : it->second;
  };
  for (VertexId u : before) {
    SparsePoly<F> label(abp.ring());
    for (VertexId v : removed_layer) {
      const auto& to_t = label_of(v, t);
      const auto& to_v = label_of(u, v);
      if (to_t.is_zero() || to_v.is_zero()) continue;
      label += to_v.scaled(to_t.constant_term());
    }
    if (!label.is_zero()) edges.push_back(Edge<F>{u, t, std::move(label)});
  }
  auto layers = abp.layers();
  layers.erase(layers.end() - 2);
  return LayeredAbp<F>(abp.ring(), std::move(layers), std::move(edges), abp.label_degree_bound());
}

/// Mirror of remove_scalar_last_layer: absorbs layer 2 when every edge out of
/// s is scalar-labeled.
template <Field F>
LayeredAbp<F> remove_scalar_first_layer(const LayeredAbp<F>& abp) {
  const std::size_t d = abp.layer_count();
  if (d < 3) throw PreconditionError("removing the first interior layer needs at least three layers");
  const VertexId s = abp.source();
  for (const auto& e : abp.edges()) {
    if (e.from == s && !e.label.is_constant()) {
      throw PreconditionError("edge " + std::to_string(s) + "->" + std::to_string(e.to) +
                              " out of the start vertex is not scalar-labeled");
    }
  }
  const auto& removed_layer = abp.layer(2);
  const auto& after = abp.layer(3);
  std::unordered_set<VertexId> removed(removed_layer.begin(), removed_layer.end());
  auto labels = detail::merged_labels(abp.edges(), abp.ring());

  std::vector<Edge<F>> edges;
  const auto zero = SparsePoly<F>(abp.ring());
  auto label_of = [&](VertexId a, VertexId b) -> const SparsePoly<F>& {
    auto it = labels.find({a, b});
    return it == labels.end() ? zero : it->second;
  };
  for (VertexId w : after) {
    SparsePoly<F> label(abp.ring());
    for (VertexId v : removed_layer) {
      const auto& from_s = label_of(s, v);
      const auto& to_w = label_of(v, w);
      if (from_s.is_zero() || to_w.is_zero()) continue;
      label += to_w.scaled(from_s.constant_term());
    }
    if (!label.is_zero()) edges.push_back(Edge<F>{s, w, std::move(label)});
  }
  for (const auto& e : abp.edges()) {
    if (!removed.contains(e.from) && !removed.contains(e.to)) edges.push_back(e);
  }
  auto layers = abp.layers();
  layers.erase(layers.begin() + 1);
  return LayeredAbp<F>(abp.ring(), std::move(layers), std::move(edges), abp.label_degree_bound());
}

template <Field F>
struct LayerCut {
  MultilayeredAbp<F> abp;
  ErrorLedger<F> ledger;
  std::vector<VertexId> cut_vertices;
};

/// Cuts a layered ABP with d layers at layer `layer_number` (1 < l < d).
///
/// With [s,u_i] = P_i + alpha_i and [u_i,t] = Q_i + beta_i over the vertices
/// u_i of the layer, the result is a two-branch multilayered ABP computing
/// F - sum P_i Q_i + sum alpha_i beta_i, with at most max{l, d-l+1} layers
/// and |A| - |L| vertices. The first branch keeps layers 1..l-1 and the
/// second layers l+1..d; the cut layer is absorbed into both.
template <Field F>
LayerCut<F> cut_at_layer(const LayeredAbp<F>& abp, std::size_t layer_number) {
  const std::size_t d = abp.layer_count();
  if (layer_number <= 1 || layer_number >= d) {
    throw PreconditionError("cut layer " + std::to_string(layer_number) + " must lie strictly between 1 and " +
                            std::to_string(d));
  }
  const auto& ring = abp.ring();
  const F& field = ring.field;
  const VertexId s = abp.source();
  const VertexId t = abp.sink();
  const auto& cut = abp.layer(layer_number);

  auto prefix = path_sums_from(abp.dag(), s);
  auto suffix = path_sums_to(abp.dag(), t);

  std::unordered_map<VertexId, std::size_t> layer_of;
  for (std::size_t j = 0; j < d; ++j) {
    for (VertexId v : abp.layers()[j]) layer_of[v] = j + 1;
  }

  ErrorLedger<F> ledger(ring);
  std::vector<Edge<F>> head_edges;
  std::vector<Edge<F>> tail_edges;
  auto cross_terms = field.zero();
  for (VertexId u : cut) {
    auto [alpha, p] = split_constant(prefix[abp.dag().index_of(u)]);
    auto [beta, q] = split_constant(suffix[abp.dag().index_of(u)]);
    ledger.add_pair(std::move(p), std::move(q));
    cross_terms = field.add(cross_terms, field.mul(alpha, beta));
    head_edges.push_back(Edge<F>{u, t, SparsePoly<F>::constant(ring, beta)});
    tail_edges.push_back(Edge<F>{s, u, SparsePoly<F>::constant(ring, alpha)});
  }
  ledger.add_constant(field.neg(cross_terms));

  for (const auto& e : abp.edges()) {
    std::size_t to_layer = layer_of.at(e.to);
    if (to_layer <= layer_number) head_edges.push_back(e);
    if (layer_of.at(e.from) >= layer_number) tail_edges.push_back(e);
  }

  std::vector<std::vector<VertexId>> head_layers(abp.layers().begin(), abp.layers().begin() + layer_number);
  head_layers.push_back({t});
  std::vector<std::vector<VertexId>> tail_layers{{s}};
  tail_layers.insert(tail_layers.end(), abp.layers().begin() + (layer_number - 1), abp.layers().end());

  LayeredAbp<F> head(ring, std::move(head_layers), std::move(head_edges), abp.label_degree_bound());
  LayeredAbp<F> tail(ring, std::move(tail_layers), std::move(tail_edges), abp.label_degree_bound());

  std::vector<LayeredAbp<F>> branches{remove_scalar_last_layer(head), remove_scalar_first_layer(tail)};
  return LayerCut<F>{MultilayeredAbp<F>(ring, std::move(branches), abp.label_degree_bound()), std::move(ledger),
                     cut};
}

template <Field F>
struct LayeredReduction {
  MultilayeredAbp<F> abp;
  ErrorLedger<F> ledger;
  TransformReport report;
};

/// Layer numbers j with d/3 < j < 2d/3.
inline std::vector<std::size_t> middle_third_layers(std::size_t d) {
  std::vector<std::size_t> out;
  for (std::size_t j = 1; j <= d; ++j) {
    if (3 * j > d && 3 * j < 2 * d) out.push_back(j);
  }
  return out;
}

/// One shrink step: cut every branch at the lightest middle-third layer j0
/// (smallest index among minimizers). Branches with at most j0 layers pass
/// through untouched. Requires d >= 4 layers.
template <Field F>
LayeredReduction<F> shrink_multilayered(const MultilayeredAbp<F>& abp) {
  const std::size_t d = abp.layer_count();
  if (d < 4) {
    throw PreconditionError("shrinking needs at least 4 layers (the middle third of " + std::to_string(d) +
                            " layers contains no layer); stop iterating");
  }
  auto candidates = middle_third_layers(d);
  std::size_t j0 = candidates.front();
  std::size_t middle_width = 0;
  for (std::size_t j : candidates) {
    middle_width += abp.layer_width(j);
    if (abp.layer_width(j) < abp.layer_width(j0)) j0 = j;
  }

  ErrorLedger<F> ledger(abp.ring());
  std::vector<LayeredAbp<F>> branches;
  std::size_t cut_width = 0;
  std::size_t cut_branches = 0;
  for (const auto& b : abp.branches()) {
    if (b.layer_count() <= j0) {
      branches.push_back(b);
      continue;
    }
    auto cut = cut_at_layer(b, j0);
    cut_width += b.layer_width(j0);
    ++cut_branches;
    ledger.append(cut.ledger);
    for (const auto& nb : cut.abp.branches()) branches.push_back(nb);
  }
  MultilayeredAbp<F> out(abp.ring(), std::move(branches), abp.label_degree_bound());

  StepRecord step;
  step.measure_before = static_cast<std::int64_t>(d);
  step.measure_after = static_cast<std::int64_t>(out.layer_count());
  step.size_before = static_cast<std::int64_t>(abp.size());
  step.size_after = static_cast<std::int64_t>(out.size());
  step.edges_before = static_cast<std::int64_t>(abp.edge_count());
  step.edges_after = static_cast<std::int64_t>(out.edge_count());
  step.ledger_added = static_cast<std::int64_t>(ledger.size());
  step.j0 = static_cast<std::int64_t>(j0);
  step.extra = {
      {"j0_width", abp.layer_width(j0)},
      {"cut_width", cut_width},
      {"cut_branches", cut_branches},
      {"middle_third_width", middle_width},
      {"middle_third_layers", candidates.size()},
      {"layer_bound", (2 * d + 2) / 3},
      {"averaging_bound", static_cast<double>(middle_width) / static_cast<double>(candidates.size())},
      {"floor_third_bound", static_cast<double>(middle_width) / static_cast<double>(d / 3)},
      {"analytic_bound", static_cast<double>(middle_width) / (static_cast<double>(d) / 3.0)},
  };
  TransformReport report{"shrink-multilayered", "layers", {step}, {}, {}};
  return LayeredReduction<F>{std::move(out), std::move(ledger), std::move(report)};
}

/// Iterates shrink_multilayered until the layer count is at most `target`.
/// Stops early (with a note) once fewer than 4 layers remain.
template <Field F>
LayeredReduction<F> reduce_layers_below(const MultilayeredAbp<F>& abp, std::size_t target) {
  if (target < 2) throw PreconditionError("target layer count must be at least 2");
  LayeredReduction<F> state{abp, ErrorLedger<F>(abp.ring()), TransformReport{"reduce-layers", "layers", {}, {}, {}}};
  while (state.abp.layer_count() > target) {
    if (state.abp.layer_count() < 4) {
      state.report.notes.push_back("stopped at " + std::to_string(state.abp.layer_count()) +
                                   " layers: the open middle third is empty");
      break;
    }
    auto step = shrink_multilayered(state.abp);
    state.abp = std::move(step.abp);
    state.ledger.append(step.ledger);
    state.report.append(step.report);
  }
  state.report.summary = {{"target", target},
                          {"layers_in", abp.layer_count()},
                          {"layers_out", state.abp.layer_count()},
                          {"size_in", abp.size()},
                          {"size_out", state.abp.size()},
                          {"ledger_size", state.ledger.size()},
                          {"reached_target", state.abp.layer_count() <= target}};
  return state;
}

template <Field F>
LayeredReduction<F> reduce_layers_below(const LayeredAbp<F>& abp, std::size_t target) {
  return reduce_layers_below(MultilayeredAbp<F>(abp), target);
}

struct BandAudit {
  Degree formal_degree = 0;
  int label_degree_bound = 1;
  /// band_counts[k-1] = #vertices with formal degree in [k*delta, (k+1)*delta),
  /// for k = 1 .. floor(d/delta) - 1.
  std::vector<std::size_t> band_counts;
  std::size_t banded_total = 0;
  std::size_t vertex_count = 0;
  std::size_t interior_vertex_count = 0;
  bool disjoint = true;
  // Lower-bound arithmetic evaluated on the instance (reporting only).
  double ambient_n = 0;
  double error_terms = 0;
  double bound_with_bands = 0;  // (n/2 - r) * (floor(n/delta) - 1)
  double bound_closed_form = 0; // (n/2 - r) * n / (2 delta)

  nlohmann::json to_json() const {
    return {{"formal_degree", formal_degree},
            {"label_degree_bound", label_degree_bound},
            {"band_counts", band_counts},
            {"banded_total", banded_total},
            {"vertex_count", vertex_count},
            {"interior_vertex_count", interior_vertex_count},
            {"disjoint", disjoint},
            {"ambient_n", ambient_n},
            {"error_terms", error_terms},
            {"bound_with_bands", bound_with_bands},
            {"bound_closed_form", bound_closed_form}};
  }
};

/// Vertex histogram over formal-degree bands plus the vertex lower-bound
/// expression for an ABP with `error_terms` ledger pairs and ambient
/// parameter `ambient_n`.
template <Field F>
BandAudit audit_degree_bands(const UnlayeredAbp<F>& abp, double ambient_n, double error_terms = 0) {
  BandAudit audit;
  audit.formal_degree = abp_formal_degree(abp);
  audit.label_degree_bound = abp.label_degree_bound();
  const Degree delta = abp.label_degree_bound();
  const Degree bands = audit.formal_degree / delta;
  audit.band_counts.assign(bands > 1 ? static_cast<std::size_t>(bands - 1) : 0, 0);
  auto fdeg = formal_degrees(abp);
  std::vector<std::set<VertexId>> members(audit.band_counts.size());
  for (std::size_t i = 0; i < abp.vertex_count(); ++i) {
    if (!fdeg[i]) continue;
    for (std::size_t k = 1; k <= members.size(); ++k) {
      Degree lo = static_cast<Degree>(k) * delta;
      if (*fdeg[i] >= lo && *fdeg[i] < lo + delta) members[k - 1].insert(abp.vertices()[i]);
    }
  }
  std::set<VertexId> seen;
  for (std::size_t k = 0; k < members.size(); ++k) {
    audit.band_counts[k] = members[k].size();
    audit.banded_total += members[k].size();
    for (VertexId v : members[k]) {
      if (!seen.insert(v).second) audit.disjoint = false;
    }
  }
  audit.vertex_count = abp.vertex_count();
  audit.interior_vertex_count = abp.vertex_count() >= 2 ? abp.vertex_count() - 2 : 0;
  audit.ambient_n = ambient_n;
  audit.error_terms = error_terms;
  const double n_prime = std::floor(ambient_n / static_cast<double>(delta));
  audit.bound_with_bands = (ambient_n / 2.0 - error_terms) * (n_prime - 1.0);
  audit.bound_closed_form = (ambient_n / 2.0 - error_terms) * ambient_n / (2.0 * static_cast<double>(delta));
  return audit;
}

template <Field F>
BandAudit audit_degree_bands(const LayeredAbp<F>& abp, double ambient_n, double error_terms = 0) {
  return audit_degree_bands(abp.dag(), ambient_n, error_terms);
}

}  // namespace abpred
