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
 * @file field.hpp
 * @brief Exact scalar fields: prime fields F_p with a 64-bit modulus and the
 * rationals with arbitrary-precision numerators and denominators.
 *
 * Fields are small value objects. Elements are plain values; every operation
 * goes through the field object so that the prime modulus can be chosen at
 * run time.
 */

#include <concepts>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "abpred/error.hpp"

namespace abpred {

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

// Deterministic Miller-Rabin for all 64-bit inputs.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++r;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Splits "a" or "a/b" (optional leading '-') into numerator and denominator
// digit strings. Returns false on malformed input.
inline bool split_fraction(std::string_view text, bool& negative, std::string_view& num,
                           std::string_view& den) {
  negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  auto slash = text.find('/');
  num = text.substr(0, slash);
  den = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  };
  if (!digits(num)) return false;
  if (slash != std::string_view::npos && !digits(den)) return false;
  return true;
}

}  // namespace detail

/// The prime field F_p. The modulus is checked for primality on construction.
class PrimeField {
 public:
  using Element = std::uint64_t;

  explicit PrimeField(std::uint64_t modulus) : modulus_(modulus) {
    if (modulus >= (std::uint64_t{1} << 62U) || !detail::is_prime_u64(modulus)) {
      throw PreconditionError("modulus " + std::to_string(modulus) + " is not a prime below 2^62");
    }
  }

  std::uint64_t modulus() const noexcept { return modulus_; }
  std::uint64_t characteristic() const noexcept { return modulus_; }
  std::string describe() const { return "p=" + std::to_string(modulus_); }

  Element zero() const noexcept { return 0; }
  Element one() const noexcept { return 1; }
  Element from_int(std::int64_t v) const noexcept {
    auto m = static_cast<std::int64_t>(modulus_);
    auto r = v % m;
    return static_cast<Element>(r < 0 ? r + m : r);
  }
  Element add(Element a, Element b) const noexcept {
    Element s = a + b;
    return s >= modulus_ ? s - modulus_ : s;
  }
  Element sub(Element a, Element b) const noexcept { return a >= b ? a - b : a + modulus_ - b; }
  Element neg(Element a) const noexcept { return a == 0 ? 0 : modulus_ - a; }
  Element mul(Element a, Element b) const noexcept { return detail::mul_mod(a, b, modulus_); }
  Element inv(Element a) const {
    if (a == 0) throw PreconditionError("inverse of zero in " + describe());
    // Extended Euclid on signed 128-bit values.
    __int128 t = 0, new_t = 1, r = modulus_, new_r = a;
    while (new_r != 0) {
      __int128 q = r / new_r;
      __int128 tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    if (t < 0) t += modulus_;
    return static_cast<Element>(t);
  }
  bool is_zero(Element a) const noexcept { return a == 0; }
  bool is_one(Element a) const noexcept { return a == 1; }
  bool is_negative(Element) const noexcept { return false; }

  Element pow(Element a, std::uint64_t e) const noexcept { return detail::pow_mod(a, e, modulus_); }

  std::string to_string(Element a) const { return std::to_string(a); }

  /// Accepts "a" or "a/b" with an optional sign; "a/b" means a * b^-1.
  std::optional<Element> parse(std::string_view text) const {
    bool negative = false;
    std::string_view num, den;
    if (!detail::split_fraction(text, negative, num, den)) return std::nullopt;
    Element value = reduce_digits(num);
    if (!den.empty()) {
      Element d = reduce_digits(den);
      if (d == 0) return std::nullopt;
      value = mul(value, inv(d));
    }
    return negative ? neg(value) : value;
  }

  template <class Rng>
  Element random_element(Rng& rng) const {
    std::uniform_int_distribution<std::uint64_t> dist(0, modulus_ - 1);
    return dist(rng);
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  Element reduce_digits(std::string_view digits) const {
    Element value = 0;
    for (char c : digits) value = add(mul(value, 10 % modulus_), static_cast<Element>(c - '0') % modulus_);
    return value;
  }

  std::uint64_t modulus_;
};

/// The rationals, exact.
class RationalField {
 public:
  using Element = boost::multiprecision::cpp_rational;

  std::uint64_t characteristic() const noexcept { return 0; }
  std::string describe() const { return "rational"; }

  Element zero() const { return Element(0); }
  Element one() const { return Element(1); }
  Element from_int(std::int64_t v) const { return Element(v); }
  Element add(const Element& a, const Element& b) const { return a + b; }
  Element sub(const Element& a, const Element& b) const { return a - b; }
  Element neg(const Element& a) const { return -a; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element inv(const Element& a) const {
    if (a == 0) throw PreconditionError("inverse of zero in rational field");
    return Element(1) / a;
  }
  bool is_zero(const Element& a) const { return a == 0; }
  bool is_one(const Element& a) const { return a == 1; }
  bool is_negative(const Element& a) const { return a < 0; }

  Element pow(Element a, std::uint64_t e) const {
    Element result(1);
    while (e != 0) {
      if (e & 1U) result *= a;
      a *= a;
      e >>= 1U;
    }
    return result;
  }

  std::string to_string(const Element& a) const { return a.str(); }

  std::optional<Element> parse(std::string_view text) const {
    bool negative = false;
    std::string_view num, den;
    if (!detail::split_fraction(text, negative, num, den)) return std::nullopt;
    boost::multiprecision::cpp_int n{std::string(num)};
    boost::multiprecision::cpp_int d(den.empty() ? std::string("1") : std::string(den));
    if (d == 0) return std::nullopt;
    Element value(n, d);
    return negative ? Element(-value) : value;
  }

  /// Small integers in [-9, 9]; enough spread for random-evaluation checks.
  template <class Rng>
  Element random_element(Rng& rng) const {
    std::uniform_int_distribution<int> dist(-9, 9);
    return Element(dist(rng));
  }

  friend bool operator==(const RationalField&, const RationalField&) = default;
};

template <class F>
concept Field = std::equality_comparable<F> && std::copy_constructible<F> &&
    requires(const F& f, const typename F::Element& a, const typename F::Element& b, std::mt19937_64& rng) {
      { f.zero() } -> std::same_as<typename F::Element>;
      { f.one() } -> std::same_as<typename F::Element>;
      { f.from_int(std::int64_t{}) } -> std::same_as<typename F::Element>;
      { f.add(a, b) } -> std::same_as<typename F::Element>;
      { f.sub(a, b) } -> std::same_as<typename F::Element>;
      { f.neg(a) } -> std::same_as<typename F::Element>;
      { f.mul(a, b) } -> std::same_as<typename F::Element>;
      { f.inv(a) } -> std::same_as<typename F::Element>;
      { f.is_zero(a) } -> std::convertible_to<bool>;
      { f.characteristic() } -> std::convertible_to<std::uint64_t>;
      { f.to_string(a) } -> std::convertible_to<std::string>;
      { f.parse(std::string_view{}) } -> std::same_as<std::optional<typename F::Element>>;
      { f.random_element(rng) } -> std::same_as<typename F::Element>;
      { f.describe() } -> std::convertible_to<std::string>;
    };

/// Run-time field choice: `p=<prime>` or `rational`.
struct FieldConfig {
  std::optional<std::uint64_t> prime;

  static FieldConfig rational() { return FieldConfig{}; }
  static FieldConfig prime_field(std::uint64_t p) { return FieldConfig{p}; }

  std::string describe() const { return prime ? "p=" + std::to_string(*prime) : "rational"; }

  static FieldConfig parse(std::string_view text) {
    if (text == "rational") return rational();
    if (text.starts_with("p=")) {
      auto digits = text.substr(2);
      if (digits.empty() || digits.size() > 19) throw ParseError(2, "expected a prime after 'p='");
      std::uint64_t p = 0;
      for (std::size_t i = 0; i < digits.size(); ++i) {
        char c = digits[i];
        if (c < '0' || c > '9') throw ParseError(2 + i, "expected a decimal digit");
        p = p * 10 + static_cast<std::uint64_t>(c - '0');
      }
      PrimeField check(p);  // throws on composite moduli
      return prime_field(p);
    }
    throw ParseError(0, "field must be 'p=<prime>' or 'rational'");
  }

  friend bool operator==(const FieldConfig&, const FieldConfig&) = default;
};

/// Calls `fn` with a concrete field object selected by `config`.
template <class Fn>
decltype(auto) with_field(const FieldConfig& config, Fn&& fn) {
  if (config.prime) return fn(PrimeField(*config.prime));
  return fn(RationalField{});
}

inline FieldConfig config_of(const PrimeField& f) { return FieldConfig::prime_field(f.modulus()); }
inline FieldConfig config_of(const RationalField&) { return FieldConfig::rational(); }

}  // namespace abpred
