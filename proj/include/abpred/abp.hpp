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
 * @file abp.hpp
 * @brief Algebraic branching programs: unlayered (any DAG with a source s and
 * sink t), layered (explicit layer lists) and multilayered (layered branches
 * sharing s and t).
 *
 * An ABP computes the sum over all s->t paths of the product of the edge
 * labels along the path. `path_sum(abp, u, v)` is the same quantity between
 * two arbitrary vertices, computed by dynamic programming in topological
 * order.
 *
 * Vertices carry stable integer ids. ABPs are immutable values: every
 * transformation returns a new object.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "abpred/error.hpp"
#include "abpred/sparse_poly.hpp"

namespace abpred {

using VertexId = std::uint32_t;

template <Field F>
struct Edge {
  VertexId from;
  VertexId to;
  SparsePoly<F> label;
};

template <Field F>
class UnlayeredAbp {
 public:
  UnlayeredAbp(Ring<F> ring, std::vector<VertexId> vertices, std::vector<Edge<F>> edges, VertexId source,
               VertexId sink, int label_degree_bound = 1)
      : ring_(std::move(ring)),
        vertices_(std::move(vertices)),
        edges_(std::move(edges)),
        source_(source),
        sink_(sink),
        label_degree_bound_(label_degree_bound) {
    index_.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (!index_.emplace(vertices_[i], i).second) {
        throw PreconditionError("duplicate vertex id " + std::to_string(vertices_[i]));
      }
    }
  }

  const Ring<F>& ring() const noexcept { return ring_; }
  const std::vector<VertexId>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge<F>>& edges() const noexcept { return edges_; }
  VertexId source() const noexcept { return source_; }
  VertexId sink() const noexcept { return sink_; }
  int label_degree_bound() const noexcept { return label_degree_bound_; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t size() const noexcept { return vertices_.size(); }

  bool has_vertex(VertexId v) const { return index_.contains(v); }

  std::size_t index_of(VertexId v) const {
    auto it = index_.find(v);
    if (it == index_.end()) throw PreconditionError("unknown vertex id " + std::to_string(v));
    return it->second;
  }

  VertexId next_free_id() const {
    VertexId m = 0;
    for (VertexId v : vertices_) m = std::max(m, v);
    return vertices_.empty() ? 0 : m + 1;
  }

  friend bool operator==(const UnlayeredAbp& a, const UnlayeredAbp& b) {
    if (!(a.ring_ == b.ring_) || a.vertices_ != b.vertices_ || a.source_ != b.source_ || a.sink_ != b.sink_ ||
        a.label_degree_bound_ != b.label_degree_bound_ || a.edges_.size() != b.edges_.size()) {
      return false;
    }
    for (std::size_t i = 0; i < a.edges_.size(); ++i) {
      const auto& x = a.edges_[i];
      const auto& y = b.edges_[i];
      if (x.from != y.from || x.to != y.to || !(x.label == y.label)) return false;
    }
    return true;
  }

 private:
  Ring<F> ring_;
  std::vector<VertexId> vertices_;
  std::vector<Edge<F>> edges_;
  VertexId source_;
  VertexId sink_;
  int label_degree_bound_;
  std::unordered_map<VertexId, std::size_t> index_;
};

namespace detail {

/// Index-based adjacency for an ABP whose edges reference known vertices.
struct GraphIndex {
  std::vector<std::vector<std::size_t>> out_edges;
  std::vector<std::vector<std::size_t>> in_edges;
  std::vector<std::size_t> edge_from;
  std::vector<std::size_t> edge_to;
  std::vector<std::size_t> topo;  // empty when the graph has a cycle
  bool acyclic = false;

  template <Field F>
  explicit GraphIndex(const UnlayeredAbp<F>& abp)
      : out_edges(abp.vertex_count()), in_edges(abp.vertex_count()) {
    edge_from.reserve(abp.edge_count());
    edge_to.reserve(abp.edge_count());
    for (std::size_t e = 0; e < abp.edge_count(); ++e) {
      std::size_t u = abp.index_of(abp.edges()[e].from);
      std::size_t v = abp.index_of(abp.edges()[e].to);
      edge_from.push_back(u);
      edge_to.push_back(v);
      out_edges[u].push_back(e);
      in_edges[v].push_back(e);
    }
    // Kahn's algorithm; smallest index first keeps the order deterministic.
    std::vector<std::size_t> indegree(abp.vertex_count());
    for (std::size_t v = 0; v < indegree.size(); ++v) indegree[v] = in_edges[v].size();
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t v = 0; v < indegree.size(); ++v) {
      if (indegree[v] == 0) ready.push(v);
    }
    while (!ready.empty()) {
      std::size_t u = ready.top();
      ready.pop();
      topo.push_back(u);
      for (std::size_t e : out_edges[u]) {
        if (--indegree[edge_to[e]] == 0) ready.push(edge_to[e]);
      }
    }
    acyclic = topo.size() == indegree.size();
    if (!acyclic) topo.clear();
  }

  void require_acyclic() const {
    if (!acyclic) throw PreconditionError("ABP graph contains a directed cycle");
  }
};

}  // namespace detail

/// Vertex ids in a deterministic topological order.
template <Field F>
std::vector<VertexId> topological_order(const UnlayeredAbp<F>& abp) {
  detail::GraphIndex g(abp);
  g.require_acyclic();
  std::vector<VertexId> out;
  out.reserve(g.topo.size());
  for (std::size_t i : g.topo) out.push_back(abp.vertices()[i]);
  return out;
}

/// [u, w] for every vertex w, indexed like abp.vertices().
template <Field F>
std::vector<SparsePoly<F>> path_sums_from(const UnlayeredAbp<F>& abp, VertexId u) {
  detail::GraphIndex g(abp);
  g.require_acyclic();
  std::vector<SparsePoly<F>> value(abp.vertex_count(), SparsePoly<F>(abp.ring()));
  std::size_t start = abp.index_of(u);
  value[start] = SparsePoly<F>::one(abp.ring());
  bool started = false;
  for (std::size_t w : g.topo) {
    if (w == start) {
      started = true;
      continue;
    }
    if (!started) continue;
    for (std::size_t e : g.in_edges[w]) {
      const auto& from_value = value[g.edge_from[e]];
      if (from_value.is_zero()) continue;
      value[w] += from_value * abp.edges()[e].label;
    }
  }
  return value;
}

/// [w, v] for every vertex w, indexed like abp.vertices().
template <Field F>
std::vector<SparsePoly<F>> path_sums_to(const UnlayeredAbp<F>& abp, VertexId v) {
  detail::GraphIndex g(abp);
  g.require_acyclic();
  std::vector<SparsePoly<F>> value(abp.vertex_count(), SparsePoly<F>(abp.ring()));
  std::size_t target = abp.index_of(v);
  value[target] = SparsePoly<F>::one(abp.ring());
  bool started = false;
  for (auto it = g.topo.rbegin(); it != g.topo.rend(); ++it) {
    std::size_t w = *it;
    if (w == target) {
      started = true;
      continue;
    }
    if (!started) continue;
    for (std::size_t e : g.out_edges[w]) {
      const auto& to_value = value[g.edge_to[e]];
      if (to_value.is_zero()) continue;
      value[w] += abp.edges()[e].label * to_value;
    }
  }
  return value;
}

/// [u, v]: sum over u->v paths of the product of edge labels. Zero when v is
/// not reachable from u; one when u == v.
template <Field F>
SparsePoly<F> path_sum(const UnlayeredAbp<F>& abp, VertexId u, VertexId v) {
  return path_sums_from(abp, u)[abp.index_of(v)];
}

template <Field F>
SparsePoly<F> computed_polynomial(const UnlayeredAbp<F>& abp) {
  return path_sum(abp, abp.source(), abp.sink());
}

/// fdeg per vertex: fdeg(s) = 0 and fdeg(u) = max over nonzero in-edges
/// (w,u) of deg(label) + fdeg(w). Vertices with no such chain back to s are
/// undefined (nullopt).
template <Field F>
std::vector<std::optional<Degree>> formal_degrees(const UnlayeredAbp<F>& abp) {
  detail::GraphIndex g(abp);
  g.require_acyclic();
  std::vector<std::optional<Degree>> fdeg(abp.vertex_count());
  std::size_t s = abp.index_of(abp.source());
  fdeg[s] = 0;
  for (std::size_t w : g.topo) {
    if (w == s) continue;
    for (std::size_t e : g.in_edges[w]) {
      const auto& label = abp.edges()[e].label;
      const auto& from = fdeg[g.edge_from[e]];
      if (label.is_zero() || !from) continue;
      Degree cand = *from + label.total_degree();
      if (!fdeg[w] || cand > *fdeg[w]) fdeg[w] = cand;
    }
  }
  return fdeg;
}

template <Field F>
Degree formal_degree(const UnlayeredAbp<F>& abp, VertexId v) {
  auto fdeg = formal_degrees(abp)[abp.index_of(v)];
  if (!fdeg) {
    throw PreconditionError("formal degree of vertex " + std::to_string(v) +
                            " is undefined: no nonzero path from the source");
  }
  return *fdeg;
}

/// Maximum formal degree over all vertices where it is defined.
template <Field F>
Degree abp_formal_degree(const UnlayeredAbp<F>& abp) {
  Degree d = 0;
  for (const auto& f : formal_degrees(abp)) {
    if (f) d = std::max(d, *f);
  }
  return d;
}

/// Longest path length (in edges) from s to each vertex; nullopt if unreachable.
template <Field F>
std::vector<std::optional<std::int64_t>> vertex_depths(const UnlayeredAbp<F>& abp) {
  detail::GraphIndex g(abp);
  g.require_acyclic();
  std::vector<std::optional<std::int64_t>> depth(abp.vertex_count());
  std::size_t s = abp.index_of(abp.source());
  depth[s] = 0;
  for (std::size_t w : g.topo) {
    for (std::size_t e : g.in_edges[w]) {
      const auto& from = depth[g.edge_from[e]];
      if (from && (!depth[w] || *from + 1 > *depth[w])) depth[w] = *from + 1;
    }
  }
  return depth;
}

template <Field F>
std::int64_t depth_of(const UnlayeredAbp<F>& abp, VertexId v) {
  auto d = vertex_depths(abp)[abp.index_of(v)];
  if (!d) throw PreconditionError("vertex " + std::to_string(v) + " is not reachable from the source");
  return *d;
}

/// depth(A) = depth of the sink.
template <Field F>
std::int64_t depth(const UnlayeredAbp<F>& abp) {
  return depth_of(abp, abp.sink());
}

/// Copy of `abp` with the given vertices and all incident edges removed.
template <Field F>
UnlayeredAbp<F> without_vertices(const UnlayeredAbp<F>& abp, const std::set<VertexId>& removed) {
  std::vector<VertexId> vertices;
  for (VertexId v : abp.vertices()) {
    if (!removed.contains(v)) vertices.push_back(v);
  }
  std::vector<Edge<F>> edges;
  for (const auto& e : abp.edges()) {
    if (!removed.contains(e.from) && !removed.contains(e.to)) edges.push_back(e);
  }
  return UnlayeredAbp<F>(abp.ring(), std::move(vertices), std::move(edges), abp.source(), abp.sink(),
                         abp.label_degree_bound());
}

/// Copy of `abp` with zero-labeled edges dropped.
template <Field F>
UnlayeredAbp<F> normalized(const UnlayeredAbp<F>& abp) {
  std::vector<Edge<F>> edges;
  for (const auto& e : abp.edges()) {
    if (!e.label.is_zero()) edges.push_back(e);
  }
  return UnlayeredAbp<F>(abp.ring(), abp.vertices(), std::move(edges), abp.source(), abp.sink(),
                         abp.label_degree_bound());
}

namespace detail {

// Vertices reachable from `start` following edges forward (or backward).
inline std::vector<bool> reachable(const GraphIndex& g, std::size_t start, bool forward) {
  std::vector<bool> seen(g.out_edges.size(), false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t e : forward ? g.out_edges[u] : g.in_edges[u]) {
      std::size_t w = forward ? g.edge_to[e] : g.edge_from[e];
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

template <Field F>
void check_edges_and_labels(const UnlayeredAbp<F>& abp, std::vector<std::string>& out) {
  if (abp.label_degree_bound() < 1) out.push_back("label degree bound must be at least 1");
  for (std::size_t i = 0; i < abp.edge_count(); ++i) {
    const auto& e = abp.edges()[i];
    std::string where = "edge " + std::to_string(i) + " (" + std::to_string(e.from) + "->" + std::to_string(e.to) + ")";
    if (!abp.has_vertex(e.from) || !abp.has_vertex(e.to)) out.push_back(where + " references an unknown vertex");
    if (!(e.label.ring() == abp.ring())) out.push_back(where + " label lives in a different ring");
    if (e.label.total_degree() > abp.label_degree_bound()) {
      out.push_back(where + " label degree " + std::to_string(e.label.total_degree()) + " exceeds bound " +
                    std::to_string(abp.label_degree_bound()));
    }
  }
}

}  // namespace detail

/// All invariant violations of an unlayered ABP; empty iff well-formed.
template <Field F>
std::vector<std::string> validate(const UnlayeredAbp<F>& abp) {
  std::vector<std::string> out;
  if (!abp.has_vertex(abp.source())) out.push_back("source vertex is missing");
  if (!abp.has_vertex(abp.sink())) out.push_back("sink vertex is missing");
  if (abp.source() == abp.sink()) out.push_back("source and sink coincide");
  detail::check_edges_and_labels(abp, out);
  if (!out.empty()) return out;
  detail::GraphIndex g(abp);
  if (!g.acyclic) {
    out.push_back("graph contains a directed cycle");
    return out;
  }
  auto from_s = detail::reachable(g, abp.index_of(abp.source()), true);
  auto to_t = detail::reachable(g, abp.index_of(abp.sink()), false);
  for (std::size_t i = 0; i < abp.vertex_count(); ++i) {
    if (!from_s[i] || !to_t[i]) out.push_back("vertex " + std::to_string(abp.vertices()[i]) + " is not on any s->t path");
  }
  return out;
}

template <Field F>
struct PruneResult {
  UnlayeredAbp<F> abp;
  std::vector<VertexId> removed;
};

/// Removes every vertex that is not on some s->t path.
template <Field F>
PruneResult<F> prune_off_path(const UnlayeredAbp<F>& abp) {
  detail::GraphIndex g(abp);
  auto from_s = detail::reachable(g, abp.index_of(abp.source()), true);
  auto to_t = detail::reachable(g, abp.index_of(abp.sink()), false);
  std::set<VertexId> removed;
  for (std::size_t i = 0; i < abp.vertex_count(); ++i) {
    if (!from_s[i] || !to_t[i]) removed.insert(abp.vertices()[i]);
  }
  return PruneResult<F>{without_vertices(abp, removed), std::vector<VertexId>(removed.begin(), removed.end())};
}

/// A layered ABP: explicit layer lists, first and last layer singletons, edges
/// only between consecutive layers. Layer numbers in the API are 1-based.
template <Field F>
class LayeredAbp {
 public:
  LayeredAbp(Ring<F> ring, std::vector<std::vector<VertexId>> layers, std::vector<Edge<F>> edges, int label_degree_bound = 1)
      : layers_(std::move(layers)), dag_(make_dag(ring, layers_, std::move(edges), label_degree_bound)) {}

  const UnlayeredAbp<F>& dag() const noexcept { return dag_; }
  const Ring<F>& ring() const noexcept { return dag_.ring(); }
  const std::vector<std::vector<VertexId>>& layers() const noexcept { return layers_; }
  const std::vector<Edge<F>>& edges() const noexcept { return dag_.edges(); }
  std::size_t layer_count() const noexcept { return layers_.size(); }
  std::size_t size() const noexcept { return dag_.vertex_count(); }
  VertexId source() const noexcept { return dag_.source(); }
  VertexId sink() const noexcept { return dag_.sink(); }
  int label_degree_bound() const noexcept { return dag_.label_degree_bound(); }

  /// Width of layer `layer_number` (1-based); 0 beyond the last layer.
  std::size_t layer_width(std::size_t layer_number) const {
    if (layer_number == 0 || layer_number > layers_.size()) return 0;
    return layers_[layer_number - 1].size();
  }

  const std::vector<VertexId>& layer(std::size_t layer_number) const {
    if (layer_number == 0 || layer_number > layers_.size()) {
      throw PreconditionError("layer " + std::to_string(layer_number) + " out of range 1.." +
                              std::to_string(layers_.size()));
    }
    return layers_[layer_number - 1];
  }

  friend bool operator==(const LayeredAbp& a, const LayeredAbp& b) {
    return a.layers_ == b.layers_ && a.dag_ == b.dag_;
  }

 private:
  static UnlayeredAbp<F> make_dag(const Ring<F>& ring, const std::vector<std::vector<VertexId>>& layers,
                                  std::vector<Edge<F>> edges, int label_degree_bound) {
    if (layers.size() < 2 || layers.front().empty() || layers.back().empty()) {
      throw PreconditionError("a layered ABP needs at least two layers with nonempty first and last layer");
    }
    std::vector<VertexId> vertices;
    for (const auto& layer : layers) vertices.insert(vertices.end(), layer.begin(), layer.end());
    return UnlayeredAbp<F>(ring, std::move(vertices), std::move(edges), layers.front().front(),
                           layers.back().front(), label_degree_bound);
  }

  std::vector<std::vector<VertexId>> layers_;
  UnlayeredAbp<F> dag_;
};

template <Field F>
std::vector<std::string> validate(const LayeredAbp<F>& abp) {
  std::vector<std::string> out;
  const auto& layers = abp.layers();
  if (layers.front().size() != 1) out.push_back("first layer must contain exactly the start vertex");
  if (layers.back().size() != 1) out.push_back("last layer must contain exactly the end vertex");
  std::unordered_map<VertexId, std::size_t> layer_of;
  for (std::size_t j = 0; j < layers.size(); ++j) {
    for (VertexId v : layers[j]) layer_of[v] = j;
  }
  detail::check_edges_and_labels(abp.dag(), out);
  for (std::size_t i = 0; i < abp.edges().size(); ++i) {
    const auto& e = abp.edges()[i];
    auto a = layer_of.find(e.from);
    auto b = layer_of.find(e.to);
    if (a == layer_of.end() || b == layer_of.end()) continue;
    if (b->second != a->second + 1) {
      out.push_back("edge " + std::to_string(i) + " (" + std::to_string(e.from) + "->" + std::to_string(e.to) +
                    ") goes from layer " + std::to_string(a->second + 1) + " to layer " + std::to_string(b->second + 1));
    }
  }
  return out;
}

template <Field F>
SparsePoly<F> computed_polynomial(const LayeredAbp<F>& abp) {
  return computed_polynomial(abp.dag());
}

template <Field F>
LayeredAbp<F> normalized(const LayeredAbp<F>& abp) {
  std::vector<Edge<F>> edges;
  for (const auto& e : abp.edges()) {
    if (!e.label.is_zero()) edges.push_back(e);
  }
  return LayeredAbp<F>(abp.ring(), abp.layers(), std::move(edges), abp.label_degree_bound());
}

/// Layered ABPs placed in parallel with their start and end vertices
/// identified. Branch i with tau_i vertices contributes tau_i - 2 vertices.
template <Field F>
class MultilayeredAbp {
 public:
  MultilayeredAbp(Ring<F> ring, std::vector<LayeredAbp<F>> branches, int label_degree_bound = 1)
      : ring_(std::move(ring)), branches_(std::move(branches)), label_degree_bound_(label_degree_bound) {}

  explicit MultilayeredAbp(const LayeredAbp<F>& single)
      : ring_(single.ring()), branches_{single}, label_degree_bound_(single.label_degree_bound()) {}

  const Ring<F>& ring() const noexcept { return ring_; }
  const std::vector<LayeredAbp<F>>& branches() const noexcept { return branches_; }
  int label_degree_bound() const noexcept { return label_degree_bound_; }

  std::size_t layer_count() const {
    std::size_t d = 2;
    for (const auto& b : branches_) d = std::max(d, b.layer_count());
    return d;
  }

  std::size_t size() const {
    std::size_t s = 2;
    for (const auto& b : branches_) s += b.size() - 2;
    return s;
  }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& b : branches_) m += b.edges().size();
    return m;
  }

  /// Sum over branches of the width of layer `layer_number` (1-based).
  std::size_t layer_width(std::size_t layer_number) const {
    std::size_t w = 0;
    for (const auto& b : branches_) w += b.layer_width(layer_number);
    return w;
  }

  /// The merged graph: s = 0, t = 1, branch interiors renumbered from 2 in
  /// branch order.
  UnlayeredAbp<F> to_unlayered() const {
    std::vector<VertexId> vertices{0, 1};
    std::vector<Edge<F>> edges;
    VertexId next = 2;
    for (const auto& b : branches_) {
      std::unordered_map<VertexId, VertexId> rename{{b.source(), 0}, {b.sink(), 1}};
      for (std::size_t j = 1; j + 1 < b.layer_count(); ++j) {
        for (VertexId v : b.layers()[j]) {
          rename[v] = next;
          vertices.push_back(next++);
        }
      }
      for (const auto& e : b.edges()) edges.push_back(Edge<F>{rename.at(e.from), rename.at(e.to), e.label});
    }
    return UnlayeredAbp<F>(ring_, std::move(vertices), std::move(edges), 0, 1, label_degree_bound_);
  }

  friend bool operator==(const MultilayeredAbp& a, const MultilayeredAbp& b) {
    return a.ring_ == b.ring_ && a.label_degree_bound_ == b.label_degree_bound_ && a.branches_ == b.branches_;
  }

 private:
  Ring<F> ring_;
  std::vector<LayeredAbp<F>> branches_;
  int label_degree_bound_;
};

template <Field F>
std::vector<std::string> validate(const MultilayeredAbp<F>& abp) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < abp.branches().size(); ++i) {
    const auto& b = abp.branches()[i];
    if (!(b.ring() == abp.ring())) out.push_back("branch " + std::to_string(i) + " lives in a different ring");
    if (b.label_degree_bound() > abp.label_degree_bound()) {
      out.push_back("branch " + std::to_string(i) + " allows labels above the multilayered degree bound");
    }
    for (const auto& v : validate(b)) out.push_back("branch " + std::to_string(i) + ": " + v);
  }
  return out;
}

template <Field F>
SparsePoly<F> computed_polynomial(const MultilayeredAbp<F>& abp) {
  SparsePoly<F> total(abp.ring());
  for (const auto& b : abp.branches()) total += computed_polynomial(b);
  return total;
}

}  // namespace abpred
