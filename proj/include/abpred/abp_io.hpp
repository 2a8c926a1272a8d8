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
 * @file abp_io.hpp
 * @brief JSON documents for ABPs, formulas, polynomials and ledgers, and DOT
 * export.
 *
 * Every document carries a header {"kind", "field", "n"} so that it can be
 * read back without outside context:
 *
 *   {"kind": "unlayered", "field": "p=7", "n": 3, "delta": 1,
 *    "vertices": [0, 1, 2], "source": 0, "sink": 1,
 *    "edges": [{"from": 0, "to": 2, "label": <poly>}, ...]}
 *   {"kind": "layered", ..., "layers": [[0], [2, 3], [1]], "edges": [...]}
 *   {"kind": "multilayered", ..., "branches": [{"layers": ..., "edges": ...}]}
 *   {"kind": "formula", ..., "root": <formula tree>, "text": "..."}
 *   {"kind": "poly", ..., "terms": <poly>, "text": "..."}
 *   {"kind": "ledger", ..., "pairs": ..., "delta": ..., "remainder": ...}
 *
 * <poly> is the term list of poly_io.hpp.
 */

#include <cstddef>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "abpred/abp.hpp"
#include "abpred/error.hpp"
#include "abpred/formula_io.hpp"
#include "abpred/ledger.hpp"
#include "abpred/poly_io.hpp"

namespace abpred {

struct DocumentHeader {
  std::string kind;
  FieldConfig field;
  std::size_t variables = 0;
  int delta = 1;
};

inline DocumentHeader read_header(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError(0, "document must be a JSON object");
  for (const char* key : {"kind", "field", "n"}) {
    if (!j.contains(key)) throw ParseError(0, std::string("document is missing '") + key + "'");
  }
  if (!j.at("kind").is_string()) throw ParseError(0, "'kind' must be a string");
  if (!j.at("field").is_string()) throw ParseError(0, "'field' must be a string");
  if (!j.at("n").is_number_integer() || j.at("n").get<std::int64_t>() < 0) throw ParseError(0, "'n' must be a non-negative integer");
  DocumentHeader h;
  h.kind = j.at("kind").get<std::string>();
  h.field = FieldConfig::parse(j.at("field").get<std::string>());
  h.variables = j.at("n").get<std::size_t>();
  const bool is_abp = h.kind == "unlayered" || h.kind == "layered" || h.kind == "multilayered";
  if (is_abp && j.contains("delta")) {
    if (!j.at("delta").is_number_integer() || j.at("delta").get<int>() < 1) {
      throw ParseError(0, "'delta' must be a positive integer");
    }
    h.delta = j.at("delta").get<int>();
  }
  return h;
}

template <Field F>
nlohmann::json header_json(const std::string& kind, const Ring<F>& ring) {
  return {{"kind", kind}, {"field", ring.field.describe()}, {"n", ring.variables}};
}

namespace detail {

template <Field F>
nlohmann::json edges_to_json(const std::vector<Edge<F>>& edges) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : edges) out.push_back({{"from", e.from}, {"to", e.to}, {"label", poly_to_json(e.label)}});
  return out;
}

template <Field F>
std::vector<Edge<F>> edges_from_json(const Ring<F>& ring, const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError(0, "'edges' must be an array");
  std::vector<Edge<F>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (!e.is_object() || !e.contains("from") || !e.contains("to") || !e.contains("label")) {
      throw ParseError(i, "edge needs 'from', 'to' and 'label'");
    }
    if (!e.at("from").is_number_unsigned() || !e.at("to").is_number_unsigned()) {
      throw ParseError(i, "edge endpoints must be non-negative integers");
    }
    out.push_back(Edge<F>{e.at("from").get<VertexId>(), e.at("to").get<VertexId>(), poly_from_json(ring, e.at("label"))});
  }
  return out;
}

inline std::vector<std::vector<VertexId>> layers_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError(0, "'layers' must be an array of arrays");
  std::vector<std::vector<VertexId>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array()) throw ParseError(i, "each layer must be an array of vertex ids");
    std::vector<VertexId> layer;
    for (const auto& v : j[i]) {
      if (!v.is_number_unsigned()) throw ParseError(i, "vertex ids must be non-negative integers");
      layer.push_back(v.get<VertexId>());
    }
    out.push_back(std::move(layer));
  }
  return out;
}

inline const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(0, std::string("document is missing '") + key + "'");
  return j.at(key);
}

inline void require_kind(const DocumentHeader& h, const std::string& kind) {
  if (h.kind != kind) throw ParseError(0, "expected a '" + kind + "' document, got '" + h.kind + "'");
}

}  // namespace detail

template <Field F>
nlohmann::json to_json(const UnlayeredAbp<F>& abp) {
  auto j = header_json("unlayered", abp.ring());
  j["delta"] = abp.label_degree_bound();
  j["vertices"] = abp.vertices();
  j["source"] = abp.source();
  j["sink"] = abp.sink();
  j["edges"] = detail::edges_to_json(abp.edges());
  return j;
}

template <Field F>
nlohmann::json to_json(const LayeredAbp<F>& abp) {
  auto j = header_json("layered", abp.ring());
  j["delta"] = abp.label_degree_bound();
  j["layers"] = abp.layers();
  j["edges"] = detail::edges_to_json(abp.edges());
  return j;
}

template <Field F>
nlohmann::json to_json(const MultilayeredAbp<F>& abp) {
  auto j = header_json("multilayered", abp.ring());
  j["delta"] = abp.label_degree_bound();
  nlohmann::json branches = nlohmann::json::array();
  for (const auto& b : abp.branches()) {
    branches.push_back({{"delta", b.label_degree_bound()}, {"layers", b.layers()}, {"edges", detail::edges_to_json(b.edges())}});
  }
  j["branches"] = branches;
  return j;
}

template <Field F>
UnlayeredAbp<F> unlayered_from_json(const F& field, const nlohmann::json& j) {
  auto h = read_header(j);
  detail::require_kind(h, "unlayered");
  Ring<F> ring{field, h.variables};
  std::vector<VertexId> vertices;
  const auto& vj = detail::require(j, "vertices");
  if (!vj.is_array()) throw ParseError(0, "'vertices' must be an array");
  for (const auto& v : vj) {
    if (!v.is_number_unsigned()) throw ParseError(0, "vertex ids must be non-negative integers");
    vertices.push_back(v.get<VertexId>());
  }
  const auto& s = detail::require(j, "source");
  const auto& t = detail::require(j, "sink");
  if (!s.is_number_unsigned() || !t.is_number_unsigned()) throw ParseError(0, "'source' and 'sink' must be vertex ids");
  return UnlayeredAbp<F>(ring, std::move(vertices), detail::edges_from_json(ring, detail::require(j, "edges")),
                         s.get<VertexId>(), t.get<VertexId>(), h.delta);
}

template <Field F>
LayeredAbp<F> layered_from_json(const F& field, const nlohmann::json& j) {
  auto h = read_header(j);
  detail::require_kind(h, "layered");
  Ring<F> ring{field, h.variables};
  return LayeredAbp<F>(ring, detail::layers_from_json(detail::require(j, "layers")),
                       detail::edges_from_json(ring, detail::require(j, "edges")), h.delta);
}

template <Field F>
MultilayeredAbp<F> multilayered_from_json(const F& field, const nlohmann::json& j) {
  auto h = read_header(j);
  if (h.kind == "layered") return MultilayeredAbp<F>(layered_from_json(field, j));
  detail::require_kind(h, "multilayered");
  Ring<F> ring{field, h.variables};
  const auto& bj = detail::require(j, "branches");
  if (!bj.is_array()) throw ParseError(0, "'branches' must be an array");
  std::vector<LayeredAbp<F>> branches;
  for (const auto& b : bj) {
    int delta = b.contains("delta") ? b.at("delta").get<int>() : h.delta;
    branches.emplace_back(ring, detail::layers_from_json(detail::require(b, "layers")),
                          detail::edges_from_json(ring, detail::require(b, "edges")), delta);
  }
  return MultilayeredAbp<F>(ring, std::move(branches), h.delta);
}

template <Field F>
nlohmann::json to_json(const Formula<F>& f) {
  auto j = header_json("formula", f.ring());
  j["root"] = formula_to_json(f);
  j["text"] = formula_to_text(f);
  return j;
}

template <Field F>
Formula<F> formula_document_from_json(const F& field, const nlohmann::json& j) {
  auto h = read_header(j);
  detail::require_kind(h, "formula");
  Ring<F> ring{field, h.variables};
  if (j.contains("root")) return formula_from_json(ring, j.at("root"));
  const auto& text = detail::require(j, "text");
  if (!text.is_string()) throw ParseError(0, "'text' must be a string");
  return parse_formula(ring, text.get<std::string>());
}

template <Field F>
nlohmann::json to_json(const SparsePoly<F>& p) {
  auto j = header_json("poly", p.ring());
  j["terms"] = poly_to_json(p);
  j["text"] = to_text(p);
  return j;
}

template <Field F>
SparsePoly<F> poly_document_from_json(const F& field, const nlohmann::json& j) {
  auto h = read_header(j);
  detail::require_kind(h, "poly");
  Ring<F> ring{field, h.variables};
  if (j.contains("terms")) return poly_from_json(ring, j.at("terms"));
  const auto& text = detail::require(j, "text");
  if (!text.is_string()) throw ParseError(0, "'text' must be a string");
  return parse_poly(ring, text.get<std::string>());
}

template <Field F>
nlohmann::json to_json(const ErrorLedger<F>& ledger) {
  auto j = header_json("ledger", ledger.ring());
  const auto body = ledger_to_json(ledger);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j;
}

template <Field F>
ErrorLedger<F> ledger_document_from_json(const F& field, const nlohmann::json& j) {
  auto h = read_header(j);
  detail::require_kind(h, "ledger");
  return ledger_from_json(Ring<F>{field, h.variables}, j);
}

/// Highlighting for DOT export: cut vertices and removed edges.
struct DotHighlight {
  std::set<VertexId> vertices;
  std::set<std::pair<VertexId, VertexId>> edges;
};

template <Field F>
std::string to_dot(const UnlayeredAbp<F>& abp, const DotHighlight& mark = {},
                   const std::vector<std::vector<VertexId>>& layers = {}) {
  std::ostringstream out;
  out << "digraph abp {\n  rankdir=LR;\n";
  for (VertexId v : abp.vertices()) {
    out << "  v" << v << " [label=\"" << v;
    if (v == abp.source()) out << " (s)";
    if (v == abp.sink()) out << " (t)";
    out << "\"";
    if (mark.vertices.contains(v)) out << ", cut=true, style=filled, fillcolor=orange";
    out << "];\n";
  }
  for (const auto& layer : layers) {
    out << "  { rank=same;";
    for (VertexId v : layer) out << " v" << v << ";";
    out << " }\n";
  }
  for (const auto& e : abp.edges()) {
    out << "  v" << e.from << " -> v" << e.to << " [label=\"" << to_text(e.label) << "\"";
    if (mark.edges.contains({e.from, e.to})) out << ", removed=true, color=red, style=dashed";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

template <Field F>
std::string to_dot(const LayeredAbp<F>& abp, const DotHighlight& mark = {}) {
  return to_dot(abp.dag(), mark, abp.layers());
}

template <Field F>
std::string to_dot(const MultilayeredAbp<F>& abp, const DotHighlight& mark = {}) {
  return to_dot(abp.to_unlayered(), mark);
}

}  // namespace abpred
