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

// Text form:  3*x1^2*x3 + 2*x2 + 5   (variables x1..xn, terms in descending
// graded order). JSON form: [{"exponents": [...], "coeff": "..."}].

#include <cctype>
#include <string>
#include <string_view>

#include <json.hpp>

#include "abpred/sparse_poly.hpp"

namespace abpred {

template <Field F>
std::string to_text(const SparsePoly<F>& p) {
  if (p.is_zero()) return "0";
  const F& f = p.field();
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    bool negative = f.is_negative(c);
    auto magnitude = negative ? f.neg(c) : c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string factors;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!factors.empty()) factors += "*";
      factors += "x" + std::to_string(i + 1);
      if (m[i] > 1) factors += "^" + std::to_string(m[i]);
    }
    if (factors.empty()) {
      out += f.to_string(magnitude);
    } else if (f.is_one(magnitude)) {
      out += factors;
    } else {
      out += f.to_string(magnitude) + "*" + factors;
    }
  }
  return out;
}

namespace detail {

class PolyTextParser {
 public:
  explicit PolyTextParser(std::string_view text) : text_(text) {}

  template <Field F>
  SparsePoly<F> parse(const Ring<F>& ring) {
    SparsePoly<F> result(ring);
    skip_space();
    if (at_end()) throw ParseError(pos_, "empty polynomial");
    bool negative = false;
    if (peek() == '-' || peek() == '+') {
      negative = peek() == '-';
      ++pos_;
    }
    while (true) {
      auto [m, c] = parse_term(ring);
      result.add_term(std::move(m), negative ? ring.field.neg(c) : c);
      skip_space();
      if (at_end()) break;
      if (peek() != '+' && peek() != '-') throw ParseError(pos_, "expected '+' or '-'");
      negative = peek() == '-';
      ++pos_;
    }
    return result;
  }

 private:
  template <Field F>
  std::pair<Monomial, typename F::Element> parse_term(const Ring<F>& ring) {
    skip_space();
    Monomial m(ring.variables, 0);
    auto coeff = ring.field.one();
    bool need_factor = true;
    if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      coeff = parse_scalar(ring.field);
      need_factor = false;
      skip_space();
      if (at_end() || peek() != '*') return {std::move(m), coeff};
      ++pos_;
      need_factor = true;
    }
    while (need_factor) {
      skip_space();
      if (at_end() || peek() != 'x') throw ParseError(pos_, "expected a variable 'x<i>' or a number");
      std::size_t var_pos = pos_;
      ++pos_;
      std::uint64_t index = parse_uint("variable index");
      if (index < 1 || index > ring.variables) {
        throw ParseError(var_pos, "variable x" + std::to_string(index) + " outside x1..x" +
                                      std::to_string(ring.variables));
      }
      std::uint64_t e = 1;
      skip_space();
      if (!at_end() && peek() == '^') {
        ++pos_;
        skip_space();
        e = parse_uint("exponent");
      }
      m[index - 1] += static_cast<Exponent>(e);
      skip_space();
      need_factor = !at_end() && peek() == '*';
      if (need_factor) ++pos_;
    }
    return {std::move(m), coeff};
  }

  template <Field F>
  typename F::Element parse_scalar(const F& field) {
    std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '/')) ++pos_;
    auto value = field.parse(text_.substr(start, pos_ - start));
    if (!value) throw ParseError(start, "malformed scalar '" + std::string(text_.substr(start, pos_ - start)) + "'");
    return *value;
  }

  std::uint64_t parse_uint(const char* what) {
    std::size_t start = pos_;
    std::uint64_t v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + static_cast<std::uint64_t>(peek() - '0');
      if (v > 1'000'000'000ULL) throw ParseError(start, std::string(what) + " too large");
      ++pos_;
    }
    if (pos_ == start) throw ParseError(start, std::string("expected ") + what);
    return v;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

template <Field F>
SparsePoly<F> parse_poly(const Ring<F>& ring, std::string_view text) {
  return detail::PolyTextParser(text).parse(ring);
}

template <Field F>
nlohmann::json poly_to_json(const SparsePoly<F>& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    terms.push_back({{"exponents", it->first}, {"coeff", p.field().to_string(it->second)}});
  }
  return terms;
}

template <Field F>
SparsePoly<F> poly_from_json(const Ring<F>& ring, const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError(0, "polynomial JSON must be an array of terms");
  SparsePoly<F> p(ring);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& term = j[i];
    if (!term.is_object() || !term.contains("exponents") || !term.contains("coeff")) {
      throw ParseError(i, "term must have 'exponents' and 'coeff'");
    }
    const auto& exps = term.at("exponents");
    if (!exps.is_array() || exps.size() != ring.variables) {
      throw ParseError(i, "term exponent vector must have length " + std::to_string(ring.variables));
    }
    Monomial m;
    for (const auto& e : exps) {
      if (!e.is_number_unsigned()) throw ParseError(i, "exponents must be non-negative integers");
      m.push_back(e.get<Exponent>());
    }
    const auto& coeff = term.at("coeff");
    if (!coeff.is_string()) throw ParseError(i, "coeff must be a decimal string");
    auto value = ring.field.parse(coeff.get<std::string>());
    if (!value) throw ParseError(i, "malformed coefficient '" + coeff.get<std::string>() + "'");
    p.add_term(std::move(m), *value);
  }
  return p;
}

}  // namespace abpred
