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
 * @file ledger.hpp
 * @brief Error ledgers and transform reports.
 *
 * Every transformation that perturbs the computed polynomial records the
 * perturbation in an ErrorLedger, oriented so that
 *
 *     F_in = F_out + sum_i P_i * Q_i + delta + R
 *
 * always holds exactly (see apply_ledger). P_i and Q_i are constant-free and
 * nonzero; pairs with a zero factor are never recorded.
 */

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "abpred/poly_io.hpp"
#include "abpred/sparse_poly.hpp"

namespace abpred {

template <Field F>
struct LedgerPair {
  SparsePoly<F> p;
  SparsePoly<F> q;
};

template <Field F>
class ErrorLedger {
 public:
  using Element = typename F::Element;

  explicit ErrorLedger(Ring<F> ring)
      : ring_(std::move(ring)), delta_(ring_.field.zero()), remainder_(ring_) {}

  const Ring<F>& ring() const noexcept { return ring_; }
  const std::vector<LedgerPair<F>>& pairs() const noexcept { return pairs_; }
  const Element& delta() const noexcept { return delta_; }
  const SparsePoly<F>& remainder() const noexcept { return remainder_; }
  Degree remainder_degree_bound() const noexcept { return remainder_degree_bound_; }
  std::size_t size() const noexcept { return pairs_.size(); }

  /// Records P*Q. Returns false (and records nothing) if either factor is zero.
  bool add_pair(SparsePoly<F> p, SparsePoly<F> q) {
    p.check_same_ring(q);
    if (p.is_zero() || q.is_zero()) return false;
    pairs_.push_back(LedgerPair<F>{std::move(p), std::move(q)});
    return true;
  }

  void add_constant(const Element& c) { delta_ = ring_.field.add(delta_, c); }

  void add_remainder(const SparsePoly<F>& r, Degree bound) {
    remainder_ += r;
    remainder_degree_bound_ = std::max(remainder_degree_bound_, bound);
  }

  void append(const ErrorLedger& other) {
    for (const auto& pr : other.pairs_) pairs_.push_back(pr);
    add_constant(other.delta_);
    if (!other.remainder_.is_zero() || other.remainder_degree_bound_ != kMinusInfinity) {
      add_remainder(other.remainder_, other.remainder_degree_bound_);
    }
  }

  friend bool operator==(const ErrorLedger& a, const ErrorLedger& b) {
    if (!(a.ring_ == b.ring_) || !(a.delta_ == b.delta_) || !(a.remainder_ == b.remainder_) ||
        a.remainder_degree_bound_ != b.remainder_degree_bound_ || a.pairs_.size() != b.pairs_.size()) {
      return false;
    }
    for (std::size_t i = 0; i < a.pairs_.size(); ++i) {
      if (!(a.pairs_[i].p == b.pairs_[i].p) || !(a.pairs_[i].q == b.pairs_[i].q)) return false;
    }
    return true;
  }

 private:
  Ring<F> ring_;
  std::vector<LedgerPair<F>> pairs_;
  Element delta_;
  SparsePoly<F> remainder_;
  Degree remainder_degree_bound_ = kMinusInfinity;
};

/// F + sum P_i Q_i + delta + R.
template <Field F>
SparsePoly<F> apply_ledger(const SparsePoly<F>& f, const ErrorLedger<F>& ledger) {
  SparsePoly<F> out = f;
  for (const auto& pr : ledger.pairs()) out += pr.p * pr.q;
  out += SparsePoly<F>::constant(f.ring(), ledger.delta());
  out += ledger.remainder();
  return out;
}

template <Field F>
nlohmann::json ledger_to_json(const ErrorLedger<F>& ledger) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& pr : ledger.pairs()) pairs.push_back({{"P", poly_to_json(pr.p)}, {"Q", poly_to_json(pr.q)}});
  nlohmann::json j{{"pairs", pairs},
                   {"delta", ledger.ring().field.to_string(ledger.delta())},
                   {"remainder", poly_to_json(ledger.remainder())}};
  if (ledger.remainder_degree_bound() == kMinusInfinity) {
    j["remainder_degree_bound"] = nullptr;
  } else {
    j["remainder_degree_bound"] = ledger.remainder_degree_bound();
  }
  return j;
}

template <Field F>
ErrorLedger<F> ledger_from_json(const Ring<F>& ring, const nlohmann::json& j) {
  ErrorLedger<F> ledger(ring);
  if (!j.is_object() || !j.contains("pairs") || !j.contains("delta")) {
    throw ParseError(0, "ledger JSON must have 'pairs' and 'delta'");
  }
  for (const auto& pr : j.at("pairs")) {
    if (!ledger.add_pair(poly_from_json(ring, pr.at("P")), poly_from_json(ring, pr.at("Q")))) {
      throw ParseError(0, "ledger pair with a zero factor");
    }
  }
  auto delta = ring.field.parse(j.at("delta").get<std::string>());
  if (!delta) throw ParseError(0, "malformed ledger delta");
  ledger.add_constant(*delta);
  if (j.contains("remainder")) {
    Degree bound = kMinusInfinity;
    if (j.contains("remainder_degree_bound") && !j.at("remainder_degree_bound").is_null()) {
      bound = j.at("remainder_degree_bound").get<Degree>();
    }
    auto r = poly_from_json(ring, j.at("remainder"));
    if (!r.is_zero() || bound != kMinusInfinity) ledger.add_remainder(r, bound);
  }
  return ledger;
}

/// One pipeline iteration. `measure` is layers (layered pipelines), depth
/// (unlayered) or formal degree (formulas).
struct StepRecord {
  std::int64_t measure_before = 0;
  std::int64_t measure_after = 0;
  std::int64_t size_before = 0;
  std::int64_t size_after = 0;
  std::int64_t edges_before = 0;
  std::int64_t edges_after = 0;
  std::int64_t ledger_added = 0;
  std::optional<std::int64_t> j0;
  nlohmann::json extra = nlohmann::json::object();
};

struct TransformReport {
  std::string pipeline;
  std::string measure = "layers";
  std::vector<StepRecord> steps;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> notes;

  nlohmann::json to_json() const {
    nlohmann::json steps_json = nlohmann::json::array();
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto& s = steps[i];
      nlohmann::json j{{"step", i + 1},
                       {measure + "_before", s.measure_before},
                       {measure + "_after", s.measure_after},
                       {"size_before", s.size_before},
                       {"size_after", s.size_after},
                       {"edges_before", s.edges_before},
                       {"edges_after", s.edges_after},
                       {"ledger_added", s.ledger_added}};
      j["j0"] = s.j0 ? nlohmann::json(*s.j0) : nlohmann::json(nullptr);
      for (const auto& [k, v] : s.extra.items()) j[k] = v;
      steps_json.push_back(std::move(j));
    }
    return {{"pipeline", pipeline}, {"measure", measure}, {"steps", steps_json}, {"summary", summary}, {"notes", notes}};
  }

  void append(const TransformReport& other) {
    steps.insert(steps.end(), other.steps.begin(), other.steps.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  }
};

}  // namespace abpred
