#pragma once

#include <concepts>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace hamlat {

/// GF(p) for a prime p < 2^31. Elements are residues in [0, p).
class PrimeField {
 public:
  using Element = std::uint32_t;
  static constexpr bool is_finite = true;

  explicit PrimeField(std::uint32_t p);

  std::uint32_t characteristic() const { return p_; }
  std::uint64_t order() const { return p_; }
  std::string name() const { return "gf" + std::to_string(p_); }

  Element zero() const { return 0; }
  Element one() const { return 1; }
  Element from_int(std::int64_t v) const;
  /// The index-th element in the enumeration 0, 1, ..., p-1.
  Element element(std::uint64_t index) const { return static_cast<Element>(index % p_); }

  Element add(Element a, Element b) const { return static_cast<Element>((std::uint64_t{a} + b) % p_); }
  Element sub(Element a, Element b) const { return static_cast<Element>((std::uint64_t{a} + p_ - b) % p_); }
  Element mul(Element a, Element b) const { return static_cast<Element>(std::uint64_t{a} * b % p_); }
  Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }
  /// Throws std::domain_error for zero.
  Element inv(Element a) const;
  bool is_zero(Element a) const { return a == 0; }
  bool is_one(Element a) const { return a == 1; }

  /// Uniform over the field; the bound only matters for infinite fields.
  Element random(std::mt19937_64& rng, std::int64_t bound = 0) const;
  std::string to_string(Element a) const { return std::to_string(a); }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
};

/// The rationals with arbitrary-precision numerators and denominators.
/// mpq_class keeps every value in lowest terms.
class RationalField {
 public:
  using Element = mpq_class;
  static constexpr bool is_finite = false;

  std::string name() const { return "q"; }

  Element zero() const { return 0; }
  Element one() const { return 1; }
  Element from_int(std::int64_t v) const;
  /// Parses "p/q" or an integer.
  Element parse(std::string_view text) const;

  Element add(const Element& a, const Element& b) const { return a + b; }
  Element sub(const Element& a, const Element& b) const { return a - b; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element neg(const Element& a) const { return -a; }
  Element inv(const Element& a) const;
  bool is_zero(const Element& a) const { return sgn(a) == 0; }
  bool is_one(const Element& a) const { return a == 1; }

  /// A uniform integer in [-bound, bound].
  Element random(std::mt19937_64& rng, std::int64_t bound = 3) const;
  std::string to_string(const Element& a) const { return a.get_str(); }

  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

template <class F>
concept ExactField = requires(const F& f, const typename F::Element& a, std::int64_t v) {
  { f.zero() } -> std::convertible_to<typename F::Element>;
  { f.one() } -> std::convertible_to<typename F::Element>;
  { f.from_int(v) } -> std::convertible_to<typename F::Element>;
  { f.add(a, a) } -> std::convertible_to<typename F::Element>;
  { f.sub(a, a) } -> std::convertible_to<typename F::Element>;
  { f.mul(a, a) } -> std::convertible_to<typename F::Element>;
  { f.inv(a) } -> std::convertible_to<typename F::Element>;
  { f.is_zero(a) } -> std::same_as<bool>;
  { f.name() } -> std::convertible_to<std::string>;
};

using AnyField = std::variant<PrimeField, RationalField>;

/// "gf2", "gf3", "gf5", ... or "q". Throws std::invalid_argument otherwise.
AnyField parse_field(std::string_view name);

}  // namespace hamlat
