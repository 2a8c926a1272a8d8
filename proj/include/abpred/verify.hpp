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
 * @file verify.hpp
 * @brief Independent checks: ledger audits, explicit path enumeration, and
 * exhaustive point enumeration over small prime fields.
 *
 * Enumeration budgets are hard limits. Exceeding one throws BudgetExceeded;
 * nothing is ever silently truncated.
 */

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "abpred/abp.hpp"
#include "abpred/constructions.hpp"
#include "abpred/error.hpp"
#include "abpred/ledger.hpp"
#include "abpred/poly_io.hpp"

namespace abpred {

inline constexpr std::uint64_t kDefaultPointBudget = 10'000'000;
inline constexpr std::uint64_t kDefaultPathBudget = 100'000;

struct CheckReport {
  std::string check;
  nlohmann::json params = nlohmann::json::object();
  bool pass = true;
  nlohmann::json counters = nlohmann::json::object();
  std::vector<std::string> warnings;
  std::vector<std::string> failures;

  void fail(std::string why) {
    pass = false;
    failures.push_back(std::move(why));
  }

  nlohmann::json to_json() const {
    return {{"check", check},   {"params", params},     {"pass", pass},
            {"counters", counters}, {"warnings", warnings}, {"failures", failures}};
  }
};

/// F_in == F_out + sum P_i Q_i + delta + R exactly, every P_i and Q_i nonzero
/// and constant-free, and deg R <= degree_cap.
template <Field F>
CheckReport check_ledger(const SparsePoly<F>& f_in, const SparsePoly<F>& f_out, const ErrorLedger<F>& ledger,
                         Degree degree_cap) {
  CheckReport r{"ledger", {{"degree_cap", degree_cap}}, true, {}, {}, {}};
  f_in.check_same_ring(f_out);
  const F& field = f_in.field();
  for (std::size_t i = 0; i < ledger.pairs().size(); ++i) {
    const auto& pr = ledger.pairs()[i];
    if (pr.p.is_zero() || pr.q.is_zero()) r.fail("pair " + std::to_string(i) + " has a zero factor");
    if (!field.is_zero(pr.p.constant_term()) || !field.is_zero(pr.q.constant_term())) {
      r.fail("pair " + std::to_string(i) + " has a nonzero constant term");
    }
  }
  if (ledger.remainder().total_degree() > degree_cap) {
    r.fail("remainder degree " + std::to_string(ledger.remainder().total_degree()) + " exceeds cap " +
           std::to_string(degree_cap));
  }
  const bool exact = apply_ledger(f_out, ledger) == f_in;
  if (!exact) r.fail("reconstruction F_out + ledger differs from F_in");
  r.counters = {{"pairs", ledger.size()},
                {"delta", field.to_string(ledger.delta())},
                {"remainder_degree", ledger.remainder().is_zero() ? nlohmann::json(nullptr)
                                                                  : nlohmann::json(ledger.remainder().total_degree())},
                {"exact", exact}};
  return r;
}

/// [u, v] by explicit enumeration of every u->v path. Throws BudgetExceeded
/// past `budget` paths.
template <Field F>
SparsePoly<F> brute_force_paths(const UnlayeredAbp<F>& abp, VertexId u, VertexId v,
                                std::uint64_t budget = kDefaultPathBudget) {
  detail::GraphIndex g(abp);
  g.require_acyclic();
  const std::size_t target = abp.index_of(v);
  SparsePoly<F> total(abp.ring());
  std::uint64_t paths = 0;
  // Explicit stack of (vertex, next out-edge position, product so far).
  struct Frame {
    std::size_t vertex;
    std::size_t next;
    SparsePoly<F> product;
  };
  std::vector<Frame> stack;
  stack.push_back(Frame{abp.index_of(u), 0, SparsePoly<F>::one(abp.ring())});
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next == 0 && top.vertex == target) {
      if (++paths > budget) throw BudgetExceeded("more than " + std::to_string(budget) + " paths to enumerate");
      total += top.product;
      stack.pop_back();
      continue;
    }
    if (top.next == g.out_edges[top.vertex].size()) {
      stack.pop_back();
      continue;
    }
    std::size_t e = g.out_edges[top.vertex][top.next++];
    SparsePoly<F> product = top.product * abp.edges()[e].label;
    stack.push_back(Frame{g.edge_to[e], 0, std::move(product)});
  }
  return total;
}

namespace detail {

// Calls fn(point) for every point of F_p^n; the point is a vector of residues.
template <class Fn>
void for_each_point(std::uint64_t p, std::size_t n, std::uint64_t budget, Fn&& fn) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > budget / p) throw BudgetExceeded(std::to_string(p) + "^" + std::to_string(n) + " points exceed the budget of " + std::to_string(budget));
    total *= p;
  }
  std::vector<std::uint64_t> point(n, 0);
  for (std::uint64_t count = 0; count < total; ++count) {
    fn(point);
    for (std::size_t i = 0; i < n; ++i) {
      if (++point[i] < p) break;
      point[i] = 0;
    }
  }
}

inline std::uint64_t points_in(std::uint64_t p, std::size_t n) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= p;
  return total;
}

}  // namespace detail

/// Every common zero in F_p^n of the first partials of esym(n, d) has at
/// least n - (d - 2) zero coordinates. Requires 2 <= d <= n and p > d.
inline CheckReport singular_support_esym(std::size_t n, std::size_t d, std::uint64_t p,
                                         std::uint64_t budget = kDefaultPointBudget) {
  if (d < 2 || d > n) throw PreconditionError("esym singular-support check needs 2 <= d <= n");
  PrimeField field(p);
  if (p <= d) throw PreconditionError("esym singular-support check needs p > d");
  CheckReport r{"esym-singular", {{"n", n}, {"d", d}, {"p", p}, {"budget", budget}}, true, {}, {}, {}};
  auto e = esym_brute(field, n, d);
  std::vector<SparsePoly<PrimeField>> partials;
  for (std::size_t i = 0; i < n; ++i) partials.push_back(partial_derivative(e, i));

  const std::size_t required = n - (d - 2);
  std::uint64_t common = 0;
  std::uint64_t violations = 0;
  std::size_t min_zero = n;
  std::vector<std::uint64_t> by_zero_count(n + 1, 0);
  detail::for_each_point(p, n, budget, [&](const std::vector<std::uint64_t>& x) {
    for (const auto& dp : partials) {
      if (!field.is_zero(evaluate(dp, x))) return;
    }
    ++common;
    std::size_t zeros = 0;
    for (auto v : x) zeros += v == 0 ? 1 : 0;
    ++by_zero_count[zeros];
    min_zero = std::min(min_zero, zeros);
    if (zeros < required) {
      ++violations;
      if (r.failures.size() < 10) {
        std::string pt;
        for (auto v : x) pt += (pt.empty() ? "" : ",") + std::to_string(v);
        r.fail("common zero (" + pt + ") has only " + std::to_string(zeros) + " zero coordinates");
      }
    }
  });
  if (violations > 0) r.pass = false;
  r.counters = {{"points", detail::points_in(p, n)},
                {"common_zeros", common},
                {"required_zero_coordinates", required},
                {"min_zero_coordinates", min_zero},
                {"common_zeros_by_zero_count", by_zero_count},
                {"violations", violations}};
  return r;
}

/// Evidence mode: common zeros of d/dx_i esym(n, d) - R_i for random R_i of
/// degree at most d - 2. Reports the support distribution only; never fails.
inline CheckReport singular_support_esym_perturbed(std::size_t n, std::size_t d, std::uint64_t p, std::uint64_t seed,
                                                   std::uint64_t budget = kDefaultPointBudget) {
  if (d < 2 || d > n) throw PreconditionError("esym singular-support check needs 2 <= d <= n");
  PrimeField field(p);
  if (p <= d) throw PreconditionError("esym singular-support check needs p > d");
  CheckReport r{"esym-singular-perturbed", {{"n", n}, {"d", d}, {"p", p}, {"seed", seed}, {"budget", budget}},
                true, {}, {"evidence only: enumeration over F_p says nothing definite about the algebraic closure"}, {}};
  Ring<PrimeField> ring{field, n};
  std::mt19937_64 rng(seed);
  auto e = esym_brute(field, n, d);
  std::vector<SparsePoly<PrimeField>> targets;
  nlohmann::json perturbations = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    // Random polynomial of degree <= d - 2: dense over monomials of that degree.
    SparsePoly<PrimeField> perturbation(ring);
    std::vector<Monomial> monomials{Monomial(n, 0)};
    for (std::size_t deg = 1; deg + 2 <= d; ++deg) {
      std::vector<Monomial> next;
      for (const auto& m : monomials) {
        if (monomial_degree(m) + 1 != static_cast<Degree>(deg)) continue;
        for (std::size_t j = 0; j < n; ++j) {
          Monomial mm = m;
          ++mm[j];
          next.push_back(mm);
        }
      }
      monomials.insert(monomials.end(), next.begin(), next.end());
    }
    for (const auto& m : monomials) perturbation.add_term(m, field.random_element(rng));
    perturbations.push_back(to_text(perturbation));
    targets.push_back(partial_derivative(e, i) - perturbation);
  }
  r.params["perturbations"] = perturbations;
  std::uint64_t common = 0;
  std::size_t max_support = 0;
  std::vector<std::uint64_t> by_support(n + 1, 0);
  detail::for_each_point(p, n, budget, [&](const std::vector<std::uint64_t>& x) {
    for (const auto& t : targets) {
      if (!field.is_zero(evaluate(t, x))) return;
    }
    ++common;
    std::size_t support = 0;
    for (auto v : x) support += v != 0 ? 1 : 0;
    ++by_support[support];
    max_support = std::max(max_support, support);
  });
  r.counters = {{"points", detail::points_in(p, n)},
                {"common_zeros", common},
                {"max_support", max_support},
                {"common_zeros_by_support", by_support}};
  return r;
}

/// For each prime p: the number of common zeros in F_p^n of x_i^D - g_i
/// (g_i reduced mod p) is at most D^n. Evidence for zero-dimensionality,
/// not a proof over the algebraic closure.
inline CheckReport power_sum_singular_check(std::size_t n, std::uint32_t big_d,
                                            const std::vector<SparsePoly<RationalField>>& g,
                                            const std::vector<std::uint64_t>& primes,
                                            std::uint64_t budget = kDefaultPointBudget) {
  if (g.size() != n) throw PreconditionError("need exactly n perturbation polynomials");
  if (big_d < 1) throw PreconditionError("D must be at least 1");
  std::vector<std::string> g_text;
  for (const auto& gi : g) {
    if (gi.variable_count() != n) throw RingMismatch("perturbation lives in a ring with the wrong variable count");
    if (gi.total_degree() > static_cast<Degree>(big_d) - 1) {
      throw PreconditionError("perturbation " + to_text(gi) + " has degree above D - 1");
    }
    g_text.push_back(to_text(gi));
  }
  CheckReport r{"powersum-singular", {{"n", n}, {"D", big_d}, {"primes", primes}, {"g", g_text}, {"budget", budget}},
                true, {}, {"evidence only: counts over F_p bound nothing over the algebraic closure"}, {}};
  std::uint64_t bound = 1;
  for (std::size_t i = 0; i < n; ++i) bound *= big_d;
  nlohmann::json per_prime = nlohmann::json::object();
  for (std::uint64_t p : primes) {
    PrimeField field(p);
    Ring<PrimeField> ring{field, n};
    std::vector<SparsePoly<PrimeField>> system;
    bool reducible = true;
    for (std::size_t i = 0; i < n; ++i) {
      SparsePoly<PrimeField> eq(ring);
      Monomial lead(n, 0);
      lead[i] = big_d;
      eq.add_term(lead, field.one());
      for (const auto& [m, c] : g[i].terms()) {
        auto value = field.parse(boost::multiprecision::numerator(c).str() + "/" +
                                 boost::multiprecision::denominator(c).str());
        if (!value) {
          reducible = false;
          continue;
        }
        eq.add_term(m, field.neg(*value));
      }
      system.push_back(std::move(eq));
    }
    if (!reducible) {
      r.warnings.push_back("p = " + std::to_string(p) + " divides a coefficient denominator; skipped");
      continue;
    }
    std::uint64_t zeros = 0;
    detail::for_each_point(p, n, budget, [&](const std::vector<std::uint64_t>& x) {
      for (const auto& eq : system) {
        if (!field.is_zero(evaluate(eq, x))) return;
      }
      ++zeros;
    });
    per_prime[std::to_string(p)] = zeros;
    if (zeros > bound) r.fail("p = " + std::to_string(p) + ": " + std::to_string(zeros) + " common zeros exceed D^n = " + std::to_string(bound));
  }
  r.counters = {{"bound", bound}, {"common_zeros", per_prime}};
  return r;
}

template <Field F>
struct EulerResult {
  bool holds = true;
  bool degenerate = false;  // the characteristic divides the degree, so t*A == 0
  Degree degree = 0;
};

/// sum_i x_i * dA/dx_i == t * A for A homogeneous of degree t.
template <Field F>
EulerResult<F> euler_check(const SparsePoly<F>& a) {
  if (!a.is_homogeneous()) throw PreconditionError("Euler's identity needs a homogeneous polynomial");
  const F& field = a.field();
  EulerResult<F> out;
  out.degree = a.is_zero() ? 0 : a.total_degree();
  SparsePoly<F> lhs(a.ring());
  for (std::size_t i = 0; i < a.variable_count(); ++i) {
    lhs += SparsePoly<F>::variable(a.ring(), i) * partial_derivative(a, i);
  }
  auto t = field.from_int(out.degree);
  out.holds = lhs == a.scaled(t);
  out.degenerate = field.is_zero(t) && !a.is_zero();
  return out;
}

}  // namespace abpred
