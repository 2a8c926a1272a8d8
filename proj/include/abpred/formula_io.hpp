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

// Formula text:  ((x1 * x2) + 3 + (x3 * (x1 + 5)))
//   every gate is parenthesized, one operator per gate, fan-in >= 2.
// Formula JSON:  {"op": "+", "children": [...]} | {"op": "*", ...}
//                | {"var": 1} (1-based) | {"const": "5"}

#include <cctype>
#include <string>
#include <string_view>

#include <json.hpp>

#include "abpred/error.hpp"
#include "abpred/formula.hpp"

namespace abpred {

template <Field F>
std::string formula_to_text(const Formula<F>& f, NodeId node) {
  const auto& n = f.node(node);
  switch (n.kind) {
    case NodeKind::kVariable:
      return "x" + std::to_string(n.variable + 1);
    case NodeKind::kConstant:
      return f.ring().field.to_string(n.constant);
    default: {
      const char* op = n.kind == NodeKind::kPlus ? " + " : " * ";
      std::string out = "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i != 0) out += op;
        out += formula_to_text(f, n.children[i]);
      }
      return out + ")";
    }
  }
}

template <Field F>
std::string formula_to_text(const Formula<F>& f) {
  return formula_to_text(f, f.root());
}

namespace detail {

template <Field F>
class FormulaTextParser {
 public:
  FormulaTextParser(std::string_view text, Formula<F>& out) : text_(text), out_(out) {}

  NodeId parse_all() {
    NodeId root = parse_node();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(pos_, "trailing characters after formula");
    return root;
  }

 private:
  NodeId parse_node() {
    skip_space();
    if (at_end()) throw ParseError(pos_, "unexpected end of formula");
    char c = peek();
    if (c == '(') return parse_gate();
    if (c == 'x') {
      std::size_t start = pos_++;
      std::size_t digits = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (digits == pos_) throw ParseError(start, "expected a variable index after 'x'");
      auto index = std::stoull(std::string(text_.substr(digits, pos_ - digits)));
      if (index < 1 || index > out_.ring().variables) {
        throw ParseError(start, "variable x" + std::to_string(index) + " outside x1..x" +
                                    std::to_string(out_.ring().variables));
      }
      return out_.add_variable(index - 1);
    }
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      if (c == '-') ++pos_;
      while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '/')) ++pos_;
      auto value = out_.ring().field.parse(text_.substr(start, pos_ - start));
      if (!value) throw ParseError(start, "malformed scalar '" + std::string(text_.substr(start, pos_ - start)) + "'");
      return out_.add_constant(*value);
    }
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  NodeId parse_gate() {
    std::size_t open = pos_++;
    std::vector<NodeId> kids{parse_node()};
    char op = 0;
    while (true) {
      skip_space();
      if (at_end()) throw ParseError(open, "unbalanced parenthesis");
      char c = peek();
      if (c == ')') {
        ++pos_;
        break;
      }
      if (c != '+' && c != '*') throw ParseError(pos_, "expected '+', '*' or ')'");
      if (op != 0 && c != op) throw ParseError(pos_, "mixed operators in one gate; add parentheses");
      op = c;
      ++pos_;
      kids.push_back(parse_node());
    }
    if (kids.size() < 2) throw ParseError(open, "a parenthesized gate needs at least two operands");
    return out_.add_gate(op == '+' ? NodeKind::kPlus : NodeKind::kTimes, std::move(kids));
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  std::string_view text_;
  Formula<F>& out_;
  std::size_t pos_ = 0;
};

}  // namespace detail

template <Field F>
Formula<F> parse_formula(const Ring<F>& ring, std::string_view text) {
  Formula<F> f(ring);
  detail::FormulaTextParser<F> parser(text, f);
  f.set_root(parser.parse_all());
  return f;
}

template <Field F>
nlohmann::json formula_to_json(const Formula<F>& f, NodeId node) {
  const auto& n = f.node(node);
  switch (n.kind) {
    case NodeKind::kVariable:
      return {{"var", n.variable + 1}};
    case NodeKind::kConstant:
      return {{"const", f.ring().field.to_string(n.constant)}};
    default: {
      nlohmann::json kids = nlohmann::json::array();
      for (NodeId c : n.children) kids.push_back(formula_to_json(f, c));
      return {{"op", n.kind == NodeKind::kPlus ? "+" : "*"}, {"children", kids}};
    }
  }
}

template <Field F>
nlohmann::json formula_to_json(const Formula<F>& f) {
  return formula_to_json(f, f.root());
}

namespace detail {

template <Field F>
NodeId formula_node_from_json(Formula<F>& f, const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(0, path + ": formula node must be an object");
  if (j.contains("var")) {
    const auto& v = j.at("var");
    if (!v.is_number_unsigned() || v.get<std::size_t>() < 1 || v.get<std::size_t>() > f.ring().variables) {
      throw ParseError(0, path + ": 'var' must be an integer in 1.." + std::to_string(f.ring().variables));
    }
    return f.add_variable(v.get<std::size_t>() - 1);
  }
  if (j.contains("const")) {
    const auto& c = j.at("const");
    if (!c.is_string()) throw ParseError(0, path + ": 'const' must be a decimal string");
    auto value = f.ring().field.parse(c.get<std::string>());
    if (!value) throw ParseError(0, path + ": malformed scalar '" + c.get<std::string>() + "'");
    return f.add_constant(*value);
  }
  if (!j.contains("op") || !j.contains("children")) {
    throw ParseError(0, path + ": node needs 'var', 'const' or 'op' with 'children'");
  }
  const auto& op = j.at("op");
  if (!op.is_string() || (op.get<std::string>() != "+" && op.get<std::string>() != "*")) {
    throw ParseError(0, path + ": 'op' must be \"+\" or \"*\"");
  }
  const auto& kids_json = j.at("children");
  if (!kids_json.is_array() || kids_json.size() < 2) {
    throw ParseError(0, path + ": 'children' must be an array of at least two nodes");
  }
  std::vector<NodeId> kids;
  for (std::size_t i = 0; i < kids_json.size(); ++i) {
    kids.push_back(formula_node_from_json(f, kids_json[i], path + ".children[" + std::to_string(i) + "]"));
  }
  return f.add_gate(op.get<std::string>() == "+" ? NodeKind::kPlus : NodeKind::kTimes, std::move(kids));
}

}  // namespace detail

template <Field F>
Formula<F> formula_from_json(const Ring<F>& ring, const nlohmann::json& j) {
  Formula<F> f(ring);
  f.set_root(detail::formula_node_from_json(f, j, "root"));
  return f;
}

}  // namespace abpred
