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
 * @file sparse_poly.hpp
 * @brief Sparse multivariate polynomials over an exact field.
 *
 * Terms are kept in a map keyed by exponent vectors under the graded
 * (degree, then lexicographic) order. Zero coefficients are never stored, so
 * two polynomials are equal iff their term maps are equal.
 */

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "abpred/error.hpp"
#include "abpred/field.hpp"

namespace abpred {

using Exponent = std::uint32_t;
using Monomial = std::vector<Exponent>;

/// Total degree. The zero polynomial has degree kMinusInfinity, so bounds of
/// the form `deg(p) <= k` hold vacuously for it.
using Degree = std::int64_t;
inline constexpr Degree kMinusInfinity = std::numeric_limits<Degree>::min();

inline Degree monomial_degree(const Monomial& m) {
  return std::accumulate(m.begin(), m.end(), Degree{0});
}

/// Graded lexicographic order: lower total degree first, ties broken by
/// comparing exponent vectors lexicographically.
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    Degree da = monomial_degree(a);
    Degree db = monomial_degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

template <Field F>
struct Ring {
  F field;
  std::size_t variables = 0;

  friend bool operator==(const Ring&, const Ring&) = default;

  std::string describe() const { return field.describe() + ", n=" + std::to_string(variables); }
};

template <Field F>
class SparsePoly {
 public:
  using Element = typename F::Element;
  using TermMap = std::map<Monomial, Element, GradedLexLess>;

  explicit SparsePoly(Ring<F> ring) : ring_(std::move(ring)) {}

  static SparsePoly zero(const Ring<F>& ring) { return SparsePoly(ring); }

  static SparsePoly constant(const Ring<F>& ring, const Element& c) {
    SparsePoly p(ring);
    p.add_term(Monomial(ring.variables, 0), c);
    return p;
  }

  template <std::integral I>
    requires(!std::same_as<I, Element>)
  static SparsePoly constant(const Ring<F>& ring, I c) {
    return constant(ring, ring.field.from_int(static_cast<std::int64_t>(c)));
  }

  static SparsePoly one(const Ring<F>& ring) { return constant(ring, ring.field.one()); }

  /// The variable x_{index+1}; indices are zero-based.
  static SparsePoly variable(const Ring<F>& ring, std::size_t index) {
    if (index >= ring.variables) {
      throw PreconditionError("variable index " + std::to_string(index) + " out of range for " +
                              std::to_string(ring.variables) + " variables");
    }
    Monomial m(ring.variables, 0);
    m[index] = 1;
    SparsePoly p(ring);
    p.add_term(std::move(m), ring.field.one());
    return p;
  }

  static SparsePoly monomial(const Ring<F>& ring, Monomial exponents, const Element& c) {
    if (exponents.size() != ring.variables) {
      throw PreconditionError("exponent vector length " + std::to_string(exponents.size()) +
                              " does not match " + std::to_string(ring.variables) + " variables");
    }
    SparsePoly p(ring);
    p.add_term(std::move(exponents), c);
    return p;
  }

  const Ring<F>& ring() const noexcept { return ring_; }
  const F& field() const noexcept { return ring_.field; }
  std::size_t variable_count() const noexcept { return ring_.variables; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  Degree total_degree() const {
    if (terms_.empty()) return kMinusInfinity;
    return monomial_degree(terms_.rbegin()->first);
  }

  /// True for the zero polynomial and for nonzero scalars.
  bool is_constant() const { return total_degree() <= 0; }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    return monomial_degree(terms_.begin()->first) == monomial_degree(terms_.rbegin()->first);
  }

  Element coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? ring_.field.zero() : it->second;
  }

  Element constant_term() const { return coefficient(Monomial(ring_.variables, 0)); }

  /// Adds c * x^m in place, dropping the term if it cancels.
  void add_term(Monomial m, const Element& c) {
    if (ring_.field.is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
      it->second = ring_.field.add(it->second, c);
      if (ring_.field.is_zero(it->second)) terms_.erase(it);
    }
  }

  SparsePoly& operator+=(const SparsePoly& other) {
    check_same_ring(other);
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
  }

  SparsePoly& operator-=(const SparsePoly& other) {
    check_same_ring(other);
    for (const auto& [m, c] : other.terms_) add_term(m, ring_.field.neg(c));
    return *this;
  }

  SparsePoly& operator*=(const SparsePoly& other) {
    *this = *this * other;
    return *this;
  }

  SparsePoly operator-() const {
    SparsePoly out(ring_);
    for (const auto& [m, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), m, ring_.field.neg(c));
    return out;
  }

  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }

  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    a.check_same_ring(b);
    SparsePoly out(a.ring_);
    if (a.is_zero() || b.is_zero()) return out;
    const std::size_t n = a.ring_.variables;
    Monomial m(n);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        for (std::size_t i = 0; i < n; ++i) m[i] = ma[i] + mb[i];
        out.add_term(m, a.ring_.field.mul(ca, cb));
      }
    }
    return out;
  }

  SparsePoly scaled(const Element& c) const {
    SparsePoly out(ring_);
    if (ring_.field.is_zero(c)) return out;
    for (const auto& [m, coeff] : terms_) out.add_term(m, ring_.field.mul(coeff, c));
    return out;
  }

  SparsePoly pow(std::uint64_t e) const {
    SparsePoly result = one(ring_);
    SparsePoly base = *this;
    while (e != 0) {
      if (e & 1U) result = result * base;
      e >>= 1U;
      if (e != 0) base = base * base;
    }
    return result;
  }

  friend bool operator==(const SparsePoly& a, const SparsePoly& b) {
    return a.ring_ == b.ring_ && a.terms_ == b.terms_;
  }

  void check_same_ring(const SparsePoly& other) const {
    if (!(ring_ == other.ring_)) {
      throw RingMismatch("ring mismatch: " + ring_.describe() + " vs " + other.ring_.describe());
    }
  }

 private:
  Ring<F> ring_;
  TermMap terms_;
};

/// Formal partial derivative with respect to x_{index+1}.
template <Field F>
SparsePoly<F> partial_derivative(const SparsePoly<F>& p, std::size_t index) {
  if (index >= p.variable_count()) {
    throw PreconditionError("derivative index " + std::to_string(index) + " out of range for " +
                            std::to_string(p.variable_count()) + " variables");
  }
  const F& f = p.field();
  SparsePoly<F> out(p.ring());
  for (const auto& [m, c] : p.terms()) {
    if (m[index] == 0) continue;
    Monomial dm = m;
    --dm[index];
    out.add_term(std::move(dm), f.mul(c, f.from_int(static_cast<std::int64_t>(m[index]))));
  }
  return out;
}

/// The degree-d homogeneous component of p.
template <Field F>
SparsePoly<F> homogeneous_component(const SparsePoly<F>& p, Degree d) {
  if (d < 0) throw PreconditionError("homogeneous component of negative degree");
  SparsePoly<F> out(p.ring());
  for (const auto& [m, c] : p.terms()) {
    if (monomial_degree(m) == d) out.add_term(m, c);
  }
  return out;
}

template <Field F>
struct ConstantSplit {
  typename F::Element constant;
  SparsePoly<F> rest;  // rest(0) == 0
};

/// p = rest + constant with rest constant-free.
template <Field F>
ConstantSplit<F> split_constant(const SparsePoly<F>& p) {
  auto c = p.constant_term();
  SparsePoly<F> rest = p;
  rest.add_term(Monomial(p.variable_count(), 0), p.field().neg(c));
  return ConstantSplit<F>{c, std::move(rest)};
}

template <Field F>
typename F::Element evaluate(const SparsePoly<F>& p, std::span<const typename F::Element> point) {
  if (point.size() != p.variable_count()) {
    throw PreconditionError("evaluation point has " + std::to_string(point.size()) + " coordinates, expected " +
                            std::to_string(p.variable_count()));
  }
  const F& f = p.field();
  auto total = f.zero();
  for (const auto& [m, c] : p.terms()) {
    auto term = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] != 0) term = f.mul(term, f.pow(point[i], m[i]));
    }
    total = f.add(total, term);
  }
  return total;
}

template <Field F>
typename F::Element evaluate(const SparsePoly<F>& p, const std::vector<typename F::Element>& point) {
  return evaluate(p, std::span<const typename F::Element>(point));
}

/// Randomized equality hint: false means definitely different, true means
/// agreement on `trials` random points. Never a substitute for operator==.
template <Field F, class Rng>
bool probably_equal(const SparsePoly<F>& a, const SparsePoly<F>& b, Rng& rng, int trials = 8) {
  a.check_same_ring(b);
  const F& f = a.field();
  std::vector<typename F::Element> point(a.variable_count());
  for (int t = 0; t < trials; ++t) {
    for (auto& x : point) x = f.random_element(rng);
    if (!(evaluate(a, point) == evaluate(b, point))) return false;
  }
  return true;
}

}  // namespace abpred
