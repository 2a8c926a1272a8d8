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

// Plain DAGs and the edge/vertex selections used for depth reduction.
//
// Depth of a vertex is the number of edges on the longest path ending at it;
// depth of a graph is the maximum over vertices. Logarithms are base 2.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "abpred/abp.hpp"
#include "abpred/error.hpp"

namespace abpred {

struct Digraph {
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// The underlying graph of an ABP; vertex i is abp.vertices()[i].
template <Field F>
Digraph digraph_of(const UnlayeredAbp<F>& abp) {
  Digraph g{abp.vertex_count(), {}};
  g.edges.reserve(abp.edge_count());
  for (const auto& e : abp.edges()) g.edges.emplace_back(abp.index_of(e.from), abp.index_of(e.to));
  return g;
}

/// Longest-path depth per vertex, ignoring vertices flagged in `removed` and
/// every edge touching them (removed vertices report depth 0).
inline std::vector<std::int64_t> longest_path_depths(const Digraph& g, const std::vector<bool>& removed = {},
                                                     const std::vector<bool>& removed_edges = {}) {
  const std::size_t n = g.vertex_count;
  auto gone = [&](std::size_t v) { return !removed.empty() && removed[v]; };
  std::vector<std::vector<std::size_t>> out(n);
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [u, v] = g.edges[e];
    if (u >= n || v >= n) throw PreconditionError("edge endpoint out of range");
    if (gone(u) || gone(v) || (!removed_edges.empty() && removed_edges[e])) continue;
    out[u].push_back(v);
    ++indegree[v];
  }
  std::vector<std::int64_t> depth(n, 0);
  std::queue<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::size_t processed = 0;
  while (!ready.empty()) {
    std::size_t u = ready.front();
    ready.pop();
    ++processed;
    for (std::size_t v : out[u]) {
      depth[v] = std::max(depth[v], depth[u] + 1);
      if (--indegree[v] == 0) ready.push(v);
    }
  }
  if (processed != n) throw PreconditionError("graph contains a directed cycle");
  return depth;
}

inline std::int64_t graph_depth(const Digraph& g, const std::vector<bool>& removed = {},
                                const std::vector<bool>& removed_edges = {}) {
  auto depth = longest_path_depths(g, removed, removed_edges);
  return depth.empty() ? 0 : *std::max_element(depth.begin(), depth.end());
}

namespace detail {

inline void require_deep_enough(std::int64_t d, double n) {
  if (n < 4) throw PreconditionError("ambient parameter n must be at least 4");
  if (static_cast<double>(d) * static_cast<double>(d) < n) {
    throw PreconditionError("graph depth " + std::to_string(d) + " is below sqrt(n) for n = " +
                            std::to_string(static_cast<std::int64_t>(n)));
  }
}

// Drops the bits at positions a and b (a != b) from x.
inline std::uint64_t drop_bits(std::uint64_t x, unsigned a, unsigned b) {
  if (a < b) std::swap(a, b);  // remove the higher position first
  for (unsigned pos : {a, b}) {
    std::uint64_t low = x & ((std::uint64_t{1} << pos) - 1);
    x = ((x >> (pos + 1)) << pos) | low;
  }
  return x;
}

}  // namespace detail

struct EdgeRemoval {
  std::int64_t depth = 0;
  std::int64_t padded_depth = 0;  // smallest power of two > depth
  unsigned bits = 0;              // log2(padded_depth)
  std::vector<std::int64_t> labels;
  /// class_sizes[b]: edges whose endpoint labels first differ (from the top) at bit b.
  std::vector<std::size_t> class_sizes;
  std::pair<unsigned, unsigned> removed_classes{0, 0};
  std::vector<std::size_t> removed_edges;  // indices into Digraph::edges, ascending
  double size_bound = 0;                   // 4m / log n
  std::int64_t depth_after = 0;
  bool labeling_valid = true;
  bool relabeling_valid = true;
  bool size_ok = true;
  bool depth_ok = true;
  double ratio = 0;  // |E'| / size_bound
  bool near_bound = false;

  bool ok() const { return labeling_valid && relabeling_valid && size_ok && depth_ok; }

  nlohmann::json to_json() const {
    return {{"depth", depth},
            {"padded_depth", padded_depth},
            {"bits", bits},
            {"class_sizes", class_sizes},
            {"removed_classes", {removed_classes.first, removed_classes.second}},
            {"removed_edge_count", removed_edges.size()},
            {"size_bound", size_bound},
            {"depth_after", depth_after},
            {"labeling_valid", labeling_valid},
            {"relabeling_valid", relabeling_valid},
            {"size_ok", size_ok},
            {"depth_ok", depth_ok},
            {"ratio", ratio},
            {"near_bound", near_bound}};
  }
};

/// Edge set whose removal at least halves the depth: label each vertex by its
/// depth, class edges by the most significant bit where the endpoint labels
/// differ, and take the two smallest classes (lowest bit position on ties).
inline EdgeRemoval valiant_edge_set(const Digraph& g, double n) {
  EdgeRemoval r;
  r.labels = longest_path_depths(g);
  r.depth = r.labels.empty() ? 0 : *std::max_element(r.labels.begin(), r.labels.end());
  detail::require_deep_enough(r.depth, n);

  r.padded_depth = 1;
  while (r.padded_depth <= r.depth) r.padded_depth *= 2;
  r.bits = static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(r.padded_depth)));

  const std::size_t m = g.edges.size();
  std::vector<unsigned> edge_class(m);
  r.class_sizes.assign(r.bits, 0);
  for (std::size_t e = 0; e < m; ++e) {
    auto lu = static_cast<std::uint64_t>(r.labels[g.edges[e].first]);
    auto lv = static_cast<std::uint64_t>(r.labels[g.edges[e].second]);
    if (lu >= lv) {
      r.labeling_valid = false;
      continue;
    }
    edge_class[e] = static_cast<unsigned>(63 - std::countl_zero(lu ^ lv));
    ++r.class_sizes[edge_class[e]];
  }

  std::vector<unsigned> order(r.bits);
  for (unsigned b = 0; b < r.bits; ++b) order[b] = b;
  std::stable_sort(order.begin(), order.end(),
                   [&](unsigned a, unsigned b) { return r.class_sizes[a] < r.class_sizes[b]; });
  r.removed_classes = {std::min(order[0], order[1]), std::max(order[0], order[1])};

  std::vector<bool> removed(m, false);
  for (std::size_t e = 0; e < m; ++e) {
    if (edge_class[e] == r.removed_classes.first || edge_class[e] == r.removed_classes.second) {
      removed[e] = true;
      r.removed_edges.push_back(e);
    }
  }
  for (std::size_t e = 0; e < m; ++e) {
    if (removed[e]) continue;
    auto lu = detail::drop_bits(static_cast<std::uint64_t>(r.labels[g.edges[e].first]), r.removed_classes.first,
                                r.removed_classes.second);
    auto lv = detail::drop_bits(static_cast<std::uint64_t>(r.labels[g.edges[e].second]), r.removed_classes.first,
                                r.removed_classes.second);
    if (lu >= lv) r.relabeling_valid = false;
  }

  r.size_bound = 4.0 * static_cast<double>(m) / std::log2(n);
  r.depth_after = graph_depth(g, {}, removed);
  r.size_ok = static_cast<double>(r.removed_edges.size()) <= r.size_bound;
  r.depth_ok = 2 * r.depth_after <= r.depth;
  r.ratio = r.size_bound > 0 ? static_cast<double>(r.removed_edges.size()) / r.size_bound : 0.0;
  r.near_bound = r.ratio >= 0.95;
  return r;
}

struct MiddleBand {
  EdgeRemoval removal;
  std::int64_t depth = 0;
  std::size_t shallow_edges = 0;  // heads with depth <= d/9
  std::size_t deep_edges = 0;     // heads with depth >= 8d/9
  std::vector<std::size_t> kept_edges;
  std::vector<std::size_t> vertices;  // U, ascending vertex index
  std::int64_t residual_depth = 0;
  bool strong_regime = false;  // d >= 36: residual bound 3d/4 applies
  bool band_ok = true;
  bool size_ok = true;
  bool residual_ok = true;

  bool ok() const { return band_ok && size_ok && residual_ok && removal.ok(); }

  nlohmann::json to_json() const {
    return {{"depth", depth},
            {"edge_removal", removal.to_json()},
            {"shallow_edges", shallow_edges},
            {"deep_edges", deep_edges},
            {"kept_edges", kept_edges.size()},
            {"vertices", vertices},
            {"residual_depth", residual_depth},
            {"strong_regime", strong_regime},
            {"band_ok", band_ok},
            {"size_ok", size_ok},
            {"residual_ok", residual_ok}};
  }
};

/// Heads of the depth-halving edge set whose depth lies strictly between d/9
/// and 8d/9. Removing them leaves depth at most 3d/4 once d >= 36, and at
/// most d/9 + d/2 + d/9 + 1 in general.
inline MiddleBand middle_band_vertex_set(const Digraph& g, double n) {
  MiddleBand mb;
  mb.removal = valiant_edge_set(g, n);
  const auto& depth = mb.removal.labels;
  const std::int64_t d = mb.removal.depth;
  mb.depth = d;
  std::set<std::size_t> heads;
  for (std::size_t e : mb.removal.removed_edges) {
    std::int64_t h = depth[g.edges[e].second];
    if (9 * h <= d) {
      ++mb.shallow_edges;
    } else if (9 * h >= 8 * d) {
      ++mb.deep_edges;
    } else {
      mb.kept_edges.push_back(e);
      heads.insert(g.edges[e].second);
    }
  }
  mb.vertices.assign(heads.begin(), heads.end());
  for (std::size_t u : mb.vertices) {
    if (9 * depth[u] < d || 9 * depth[u] > 8 * d) mb.band_ok = false;
  }
  std::vector<bool> removed(g.vertex_count, false);
  for (std::size_t u : mb.vertices) removed[u] = true;
  mb.residual_depth = graph_depth(g, removed);
  mb.strong_regime = d >= 36;
  mb.size_ok = static_cast<double>(mb.vertices.size()) <= mb.removal.size_bound;
  // 3d/4, or the exact path-splitting bound 2d/9 + d/2 + 1 = (13d + 18) / 18.
  mb.residual_ok = mb.strong_regime ? 4 * mb.residual_depth <= 3 * d : 18 * mb.residual_depth <= 13 * d + 18;
  return mb;
}

}  // namespace abpred
