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

// Power sums and elementary symmetric polynomials, plus their ABP and
// formula realizations.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "abpred/abp.hpp"
#include "abpred/error.hpp"
#include "abpred/formula.hpp"
#include "abpred/sparse_poly.hpp"

namespace abpred {

/// x1^k + ... + xn^k.
template <Field F>
SparsePoly<F> power_sum_poly(const F& field, std::size_t n, std::uint32_t k) {
  Ring<F> ring{field, n};
  SparsePoly<F> p(ring);
  for (std::size_t i = 0; i < n; ++i) {
    Monomial m(n, 0);
    m[i] = k;
    p.add_term(std::move(m), field.one());
  }
  return p;
}

/// n parallel chains from s to t, chain i multiplying x_i into the path
/// k times. With label degree bound delta each edge carries x_i^delta (the
/// last one the remainder), giving ceil(k/delta) + 1 layers.
///
/// Ids: s = 0, t = 1, then interior vertices layer by layer, chain order
/// inside a layer.
template <Field F>
LayeredAbp<F> power_sum_abp(const F& field, std::size_t n, std::uint32_t k, int delta = 1) {
  if (n < 1 || k < 1) throw PreconditionError("power-sum ABP needs n >= 1 and k >= 1");
  if (delta < 1) throw PreconditionError("label degree bound must be at least 1");
  Ring<F> ring{field, n};
  const std::uint32_t step = static_cast<std::uint32_t>(delta);
  const std::uint32_t hops = (k + step - 1) / step;
  std::vector<std::vector<VertexId>> layers{{0}};
  VertexId next = 2;
  for (std::uint32_t j = 1; j < hops; ++j) {
    std::vector<VertexId> layer;
    for (std::size_t i = 0; i < n; ++i) layer.push_back(next++);
    layers.push_back(std::move(layer));
  }
  layers.push_back({1});

  std::vector<Edge<F>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < hops; ++j) {
      std::uint32_t e = (j + 1 < hops) ? step : k - step * (hops - 1);
      Monomial m(n, 0);
      m[i] = e;
      VertexId from = j == 0 ? VertexId{0} : layers[j][i];
      VertexId to = j + 1 == hops ? VertexId{1} : layers[j + 1][i];
      edges.push_back(Edge<F>{from, to, SparsePoly<F>::monomial(ring, std::move(m), field.one())});
    }
  }
  return LayeredAbp<F>(ring, std::move(layers), std::move(edges), delta);
}

/// Sum over i of x_i * x_i * ... * x_i (k factors).
template <Field F>
Formula<F> power_sum_formula(const F& field, std::size_t n, std::uint32_t k) {
  if (n < 1 || k < 1) throw PreconditionError("power-sum formula needs n >= 1 and k >= 1");
  Ring<F> ring{field, n};
  std::vector<Formula<F>> terms;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Formula<F>> factors(k, Formula<F>::variable(ring, i));
    terms.push_back(Formula<F>::product(ring, factors));
  }
  return Formula<F>::sum(ring, terms);
}

/// Sum over all d-subsets S of [n] of prod_{j in S} x_j.
template <Field F>
SparsePoly<F> esym_brute(const F& field, std::size_t n, std::size_t d) {
  Ring<F> ring{field, n};
  SparsePoly<F> p(ring);
  if (d > n) return p;
  std::vector<std::size_t> pick(d);
  for (std::size_t i = 0; i < d; ++i) pick[i] = i;
  while (true) {
    Monomial m(n, 0);
    for (std::size_t i : pick) m[i] = 1;
    p.add_term(std::move(m), field.one());
    // Next combination in lexicographic order.
    std::size_t i = d;
    while (i > 0 && pick[i - 1] == n - d + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < d; ++j) pick[j] = pick[j - 1] + 1;
  }
  return p;
}

namespace detail {

/// Solves A x = b exactly by Gaussian elimination; throws if A is singular.
template <Field F>
std::vector<typename F::Element> solve_linear(const F& field, std::vector<std::vector<typename F::Element>> a,
                                              std::vector<typename F::Element> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && field.is_zero(a[pivot][col])) ++pivot;
    if (pivot == n) throw PreconditionError("interpolation system is singular");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    auto inv = field.inv(a[col][col]);
    for (std::size_t j = col; j < n; ++j) a[col][j] = field.mul(a[col][j], inv);
    b[col] = field.mul(b[col], inv);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || field.is_zero(a[r][col])) continue;
      auto factor = a[r][col];
      for (std::size_t j = col; j < n; ++j) a[r][j] = field.sub(a[r][j], field.mul(factor, a[col][j]));
      b[r] = field.sub(b[r], field.mul(factor, b[col]));
    }
  }
  return b;
}

}  // namespace detail

template <Field F>
struct BenOrWeights {
  std::vector<typename F::Element> points;   // beta_0 .. beta_n
  std::vector<typename F::Element> weights;  // lambda_0 .. lambda_n
};

/// Weights lambda_j with sum_j lambda_j prod_i (x_i + beta_j) = esym(n, d).
/// Since prod_i (x_i + beta) = sum_k esym(n, k) beta^(n-k), this is the
/// system sum_j lambda_j beta_j^(n-k) = [k == d] for k = 0..n.
template <Field F>
BenOrWeights<F> ben_or_weights(const F& field, std::size_t n, std::size_t d,
                               std::optional<std::vector<typename F::Element>> points = std::nullopt) {
  if (d > n) throw PreconditionError("esym degree d must not exceed n");
  std::vector<typename F::Element> beta;
  if (points) {
    beta = *points;
  } else {
    if (field.characteristic() != 0 && field.characteristic() <= n) {
      throw PreconditionError("default interpolation points 0..n need a field with more than n elements (p > n)");
    }
    for (std::size_t j = 0; j <= n; ++j) beta.push_back(field.from_int(static_cast<std::int64_t>(j)));
  }
  if (beta.size() != n + 1) throw PreconditionError("need exactly n + 1 interpolation points");
  for (std::size_t a = 0; a < beta.size(); ++a) {
    for (std::size_t b = a + 1; b < beta.size(); ++b) {
      if (beta[a] == beta[b]) throw PreconditionError("interpolation points must be distinct");
    }
  }
  std::vector<std::vector<typename F::Element>> a(n + 1, std::vector<typename F::Element>(n + 1));
  std::vector<typename F::Element> rhs(n + 1, field.zero());
  for (std::size_t k = 0; k <= n; ++k) {
    for (std::size_t j = 0; j <= n; ++j) a[k][j] = field.pow(beta[j], n - k);
  }
  rhs[d] = field.one();
  return BenOrWeights<F>{beta, detail::solve_linear(field, std::move(a), std::move(rhs))};
}

/// Depth-3 formula sum_j lambda_j * prod_i (x_i + beta_j) computing esym(n, d),
/// with n(n+1) variable leaves.
template <Field F>
Formula<F> esym_ben_or_formula(const F& field, std::size_t n, std::size_t d,
                               std::optional<std::vector<typename F::Element>> points = std::nullopt) {
  if (n < 1) throw PreconditionError("esym formula needs n >= 1");
  auto w = ben_or_weights(field, n, d, std::move(points));
  Ring<F> ring{field, n};
  Formula<F> f(ring);
  std::vector<NodeId> terms;
  for (std::size_t j = 0; j <= n; ++j) {
    std::vector<NodeId> factors{f.add_constant(w.weights[j])};
    for (std::size_t i = 0; i < n; ++i) {
      factors.push_back(f.add_plus({f.add_variable(i), f.add_constant(w.points[j])}));
    }
    terms.push_back(f.add_times(std::move(factors)));
  }
  f.set_root(f.add_plus(std::move(terms)));
  return f;
}

template <Field F>
struct IdentityCheck {
  bool holds = true;
  std::vector<std::size_t> failing;  // zero-based variable indices
};

/// d/dx_i esym(n,d) == esym(n,d-1) - x_i * d/dx_i esym(n,d-1) for every i.
template <Field F>
IdentityCheck<F> esym_derivative_identity_check(const F& field, std::size_t n, std::size_t d) {
  if (d < 1 || d > n) throw PreconditionError("identity needs 1 <= d <= n");
  Ring<F> ring{field, n};
  auto top = esym_brute(field, n, d);
  auto below = esym_brute(field, n, d - 1);
  IdentityCheck<F> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto lhs = partial_derivative(top, i);
    auto rhs = below - SparsePoly<F>::variable(ring, i) * partial_derivative(below, i);
    if (!(lhs == rhs)) {
      out.holds = false;
      out.failing.push_back(i);
    }
  }
  return out;
}

/// sum_i d/dx_i esym(n,d) == (n - d + 1) * esym(n, d-1).
template <Field F>
bool esym_summed_identity_check(const F& field, std::size_t n, std::size_t d) {
  if (d < 1 || d > n) throw PreconditionError("identity needs 1 <= d <= n");
  auto top = esym_brute(field, n, d);
  SparsePoly<F> lhs(top.ring());
  for (std::size_t i = 0; i < n; ++i) lhs += partial_derivative(top, i);
  auto rhs = esym_brute(field, n, d - 1).scaled(field.from_int(static_cast<std::int64_t>(n - d + 1)));
  return lhs == rhs;
}

}  // namespace abpred
