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
 * @file formula.hpp
 * @brief Arithmetic formulas (trees of + and * gates over variables and
 * scalars).
 *
 * Nodes live in an arena and keep their ids across edits: replacing a
 * subtree by a scalar leaf rewrites one node in place and leaves the old
 * descendants unreachable. Only nodes reachable from the root are part of
 * the formula.
 *
 * formula_size() counts variable leaves; scalar leaves are free. Formal degree: 1 for
 * a variable leaf, 0 for a scalar leaf, max over children at a + gate, sum
 * over children at a * gate.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "abpred/error.hpp"
#include "abpred/sparse_poly.hpp"

namespace abpred {

using NodeId = std::uint32_t;

enum class NodeKind { kVariable, kConstant, kPlus, kTimes };

template <Field F>
struct FormulaNode {
  NodeKind kind = NodeKind::kConstant;
  std::size_t variable = 0;  // zero-based, for kVariable
  typename F::Element constant{};
  std::vector<NodeId> children;
};

template <Field F>
class Formula {
 public:
  using Element = typename F::Element;
  using Node = FormulaNode<F>;

  explicit Formula(Ring<F> ring) : ring_(std::move(ring)) {}

  static Formula variable(const Ring<F>& ring, std::size_t index) {
    Formula f(ring);
    f.set_root(f.add_variable(index));
    return f;
  }

  static Formula constant(const Ring<F>& ring, const Element& c) {
    Formula f(ring);
    f.set_root(f.add_constant(c));
    return f;
  }

  /// + gate over copies of the given formulas; a single operand is returned as is.
  static Formula sum(const Ring<F>& ring, const std::vector<Formula>& terms) { return combine(ring, NodeKind::kPlus, terms); }

  /// * gate over copies of the given formulas; a single operand is returned as is.
  static Formula product(const Ring<F>& ring, const std::vector<Formula>& factors) {
    return combine(ring, NodeKind::kTimes, factors);
  }

  NodeId add_variable(std::size_t index) {
    if (index >= ring_.variables) {
      throw PreconditionError("variable index " + std::to_string(index) + " out of range for " +
                              std::to_string(ring_.variables) + " variables");
    }
    Node n;
    n.kind = NodeKind::kVariable;
    n.variable = index;
    n.constant = ring_.field.zero();
    return push(std::move(n));
  }

  NodeId add_constant(const Element& c) {
    Node n;
    n.kind = NodeKind::kConstant;
    n.constant = c;
    return push(std::move(n));
  }

  NodeId add_gate(NodeKind kind, std::vector<NodeId> children) {
    if (kind != NodeKind::kPlus && kind != NodeKind::kTimes) throw PreconditionError("gate must be + or *");
    if (children.size() < 2) throw PreconditionError("gates need fan-in at least 2");
    for (NodeId c : children) check_id(c);
    Node n;
    n.kind = kind;
    n.constant = ring_.field.zero();
    n.children = std::move(children);
    return push(std::move(n));
  }

  NodeId add_plus(std::vector<NodeId> children) { return add_gate(NodeKind::kPlus, std::move(children)); }
  NodeId add_times(std::vector<NodeId> children) { return add_gate(NodeKind::kTimes, std::move(children)); }

  /// Copies the subtree of `other` rooted at `node` into this arena.
  NodeId graft(const Formula& other, NodeId node) {
    const Node& src = other.node(node);
    switch (src.kind) {
      case NodeKind::kVariable:
        return add_variable(src.variable);
      case NodeKind::kConstant:
        return add_constant(src.constant);
      default: {
        std::vector<NodeId> kids;
        kids.reserve(src.children.size());
        for (NodeId c : src.children) kids.push_back(graft(other, c));
        return add_gate(src.kind, std::move(kids));
      }
    }
  }

  NodeId graft(const Formula& other) { return graft(other, other.root()); }

  void set_root(NodeId id) {
    check_id(id);
    root_ = id;
    has_root_ = true;
  }

  /// Replaces the children of gate `id` (fan-in stays at least 2).
  void set_children(NodeId id, std::vector<NodeId> children) {
    check_id(id);
    if (nodes_[id].children.empty()) throw PreconditionError("node " + std::to_string(id) + " is a leaf");
    if (children.size() < 2) throw PreconditionError("gates need fan-in at least 2");
    for (NodeId c : children) check_id(c);
    nodes_[id].children = std::move(children);
  }

  /// Turns `id` into a scalar leaf in place (its former subtree becomes unreachable).
  void make_constant(NodeId id, const Element& c) {
    check_id(id);
    nodes_[id].kind = NodeKind::kConstant;
    nodes_[id].constant = c;
    nodes_[id].children.clear();
  }

  const Ring<F>& ring() const noexcept { return ring_; }
  NodeId root() const {
    if (!has_root_) throw PreconditionError("formula has no root");
    return root_;
  }
  bool has_root() const noexcept { return has_root_; }
  const Node& node(NodeId id) const {
    check_id(id);
    return nodes_[id];
  }
  std::size_t arena_size() const noexcept { return nodes_.size(); }

 private:
  static Formula combine(const Ring<F>& ring, NodeKind kind, const std::vector<Formula>& parts) {
    if (parts.empty()) throw PreconditionError("cannot combine an empty list of formulas");
    if (parts.size() == 1) return parts.front();
    Formula f(ring);
    std::vector<NodeId> kids;
    for (const auto& p : parts) {
      if (!(p.ring() == ring)) throw RingMismatch("formula operands live in different rings");
      kids.push_back(f.graft(p));
    }
    f.set_root(f.add_gate(kind, std::move(kids)));
    return f;
  }

  NodeId push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  void check_id(NodeId id) const {
    if (id >= nodes_.size()) throw PreconditionError("unknown formula node " + std::to_string(id));
  }

  Ring<F> ring_;
  std::vector<Node> nodes_;
  NodeId root_ = 0;
  bool has_root_ = false;
};

/// Reachable node ids in preorder (children left to right).
template <Field F>
std::vector<NodeId> preorder(const Formula<F>& f, NodeId start) {
  std::vector<NodeId> out;
  std::vector<NodeId> stack{start};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    out.push_back(id);
    const auto& kids = f.node(id).children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

template <Field F>
std::vector<NodeId> preorder(const Formula<F>& f) {
  return preorder(f, f.root());
}

/// Ids of the variable leaves under `start`.
template <Field F>
std::vector<NodeId> variable_leaves(const Formula<F>& f, NodeId start) {
  std::vector<NodeId> out;
  for (NodeId id : preorder(f, start)) {
    if (f.node(id).kind == NodeKind::kVariable) out.push_back(id);
  }
  return out;
}

/// Number of variable leaves under `start`.
template <Field F>
std::size_t formula_size(const Formula<F>& f, NodeId start) {
  return variable_leaves(f, start).size();
}

template <Field F>
std::size_t formula_size(const Formula<F>& f) {
  return formula_size(f, f.root());
}

/// All leaves, scalar ones included.
template <Field F>
std::size_t total_leaves(const Formula<F>& f) {
  std::size_t n = 0;
  for (NodeId id : preorder(f)) {
    if (f.node(id).children.empty()) ++n;
  }
  return n;
}

template <Field F>
std::size_t gate_count(const Formula<F>& f) {
  std::size_t n = 0;
  for (NodeId id : preorder(f)) {
    if (!f.node(id).children.empty()) ++n;
  }
  return n;
}

/// Formal degree of every node, indexed by node id (unreachable nodes get 0).
template <Field F>
std::vector<Degree> formal_degrees(const Formula<F>& f) {
  std::vector<Degree> fdeg(f.arena_size(), 0);
  auto order = preorder(f);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& n = f.node(*it);
    switch (n.kind) {
      case NodeKind::kVariable:
        fdeg[*it] = 1;
        break;
      case NodeKind::kConstant:
        fdeg[*it] = 0;
        break;
      case NodeKind::kPlus: {
        Degree d = 0;
        for (NodeId c : n.children) d = std::max(d, fdeg[c]);
        fdeg[*it] = d;
        break;
      }
      case NodeKind::kTimes: {
        Degree d = 0;
        for (NodeId c : n.children) d += fdeg[c];
        fdeg[*it] = d;
        break;
      }
    }
  }
  return fdeg;
}

template <Field F>
Degree formal_degree(const Formula<F>& f) {
  return formal_degrees(f)[f.root()];
}

/// Polynomial computed at every reachable node, indexed by node id.
template <Field F>
std::vector<SparsePoly<F>> expand_all(const Formula<F>& f) {
  std::vector<SparsePoly<F>> value(f.arena_size(), SparsePoly<F>(f.ring()));
  auto order = preorder(f);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& n = f.node(*it);
    switch (n.kind) {
      case NodeKind::kVariable:
        value[*it] = SparsePoly<F>::variable(f.ring(), n.variable);
        break;
      case NodeKind::kConstant:
        value[*it] = SparsePoly<F>::constant(f.ring(), n.constant);
        break;
      case NodeKind::kPlus: {
        SparsePoly<F> acc(f.ring());
        for (NodeId c : n.children) acc += value[c];
        value[*it] = std::move(acc);
        break;
      }
      case NodeKind::kTimes: {
        SparsePoly<F> acc = SparsePoly<F>::one(f.ring());
        for (NodeId c : n.children) acc = acc * value[c];
        value[*it] = std::move(acc);
        break;
      }
    }
  }
  return value;
}

template <Field F>
SparsePoly<F> expand(const Formula<F>& f, NodeId start) {
  Formula<F> sub(f.ring());
  sub.set_root(sub.graft(f, start));
  return expand_all(sub)[sub.root()];
}

template <Field F>
SparsePoly<F> expand(const Formula<F>& f) {
  return expand_all(f)[f.root()];
}

/// The subformula rooted at `node`, as a fresh compact formula.
template <Field F>
Formula<F> subtree(const Formula<F>& f, NodeId node) {
  Formula<F> out(f.ring());
  out.set_root(out.graft(f, node));
  return out;
}

/// Copy of f with only its reachable nodes, renumbered in preorder.
template <Field F>
Formula<F> compacted(const Formula<F>& f) {
  return subtree(f, f.root());
}

/// Copy of f in which node `node` is a scalar leaf labeled c. Node ids are kept.
template <Field F>
Formula<F> replace_with_constant(const Formula<F>& f, NodeId node, const typename F::Element& c) {
  Formula<F> out = f;
  out.make_constant(node, c);
  return out;
}

/// Structural equality of the reachable trees (arena layout is ignored).
template <Field F>
bool same_tree(const Formula<F>& a, NodeId x, const Formula<F>& b, NodeId y) {
  const auto& p = a.node(x);
  const auto& q = b.node(y);
  if (p.kind != q.kind || p.children.size() != q.children.size()) return false;
  if (p.kind == NodeKind::kVariable && p.variable != q.variable) return false;
  if (p.kind == NodeKind::kConstant && !(p.constant == q.constant)) return false;
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    if (!same_tree(a, p.children[i], b, q.children[i])) return false;
  }
  return true;
}

template <Field F>
bool operator==(const Formula<F>& a, const Formula<F>& b) {
  return a.ring() == b.ring() && a.has_root() == b.has_root() && (!a.has_root() || same_tree(a, a.root(), b, b.root()));
}

/// Invariant violations; empty iff the reachable part is a tree with valid
/// leaves and gates of fan-in at least 2.
template <Field F>
std::vector<std::string> validate(const Formula<F>& f) {
  std::vector<std::string> out;
  if (!f.has_root()) {
    out.push_back("formula has no root");
    return out;
  }
  std::vector<int> visits(f.arena_size(), 0);
  std::vector<NodeId> stack{f.root()};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (++visits[id] > 1) {
      out.push_back("node " + std::to_string(id) + " has more than one parent");
      continue;
    }
    const auto& n = f.node(id);
    switch (n.kind) {
      case NodeKind::kVariable:
        if (n.variable >= f.ring().variables) out.push_back("node " + std::to_string(id) + " uses an unknown variable");
        if (!n.children.empty()) out.push_back("leaf " + std::to_string(id) + " has children");
        break;
      case NodeKind::kConstant:
        if (!n.children.empty()) out.push_back("leaf " + std::to_string(id) + " has children");
        break;
      default:
        if (n.children.size() < 2) out.push_back("gate " + std::to_string(id) + " has fan-in below 2");
        for (NodeId c : n.children) stack.push_back(c);
    }
  }
  return out;
}

}  // namespace abpred
