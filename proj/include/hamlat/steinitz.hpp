#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace hamlat {

/// Deterministic Miller-Rabin, exact for the whole 64-bit range.
bool is_prime(std::uint64_t n);

/// Prime factorization as ascending (prime, multiplicity) pairs. factorize(1) is empty.
std::vector<std::pair<std::uint64_t, std::uint64_t>> factorize(std::uint64_t n);

/// Exponent of a prime in a Steinitz number: a natural number or infinity.
/// Infinity absorbs under addition and dominates every finite value.
class Exponent {
 public:
  constexpr Exponent() = default;

  static constexpr Exponent finite(std::uint64_t k) { return Exponent(k, false); }
  static constexpr Exponent infinity() { return Exponent(0, true); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_zero() const { return !infinite_ && value_ == 0; }
  // Throws std::domain_error for infinity.
  std::uint64_t value() const;

  friend Exponent operator+(Exponent a, Exponent b);
  friend constexpr bool operator==(Exponent a, Exponent b) = default;
  friend constexpr std::strong_ordering operator<=>(Exponent a, Exponent b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }

 private:
  constexpr Exponent(std::uint64_t v, bool inf) : value_(v), infinite_(inf) {}
  std::uint64_t value_ = 0;
  bool infinite_ = false;
};

/// A supernatural number prod p^{r_p}, stored sparsely: only primes with
/// nonzero exponent appear, so 1 is the empty map.
class SteinitzNumber {
 public:
  using FactorMap = std::map<std::uint64_t, Exponent>;

  SteinitzNumber() = default;

  /// Validates that every key is prime; zero exponents are dropped.
  explicit SteinitzNumber(const FactorMap& factors);

  static SteinitzNumber from_natural(std::uint64_t n);
  static SteinitzNumber parse(std::string_view text);

  const FactorMap& factors() const { return factors_; }
  Exponent exponent(std::uint64_t prime) const;
  bool is_finite() const;
  bool is_one() const { return factors_.empty(); }

  /// Throws std::domain_error for an infinite number.
  mpz_class to_natural() const;

  /// Canonical text: primes ascending, `inf` for infinity, `1` for the empty product.
  std::string to_string() const;

  friend SteinitzNumber operator*(const SteinitzNumber& a, const SteinitzNumber& b);
  friend bool operator==(const SteinitzNumber& a, const SteinitzNumber& b) = default;

 private:
  FactorMap factors_;
};

SteinitzNumber mul(const SteinitzNumber& a, const SteinitzNumber& b);
SteinitzNumber lcm(const SteinitzNumber& a, const SteinitzNumber& b);
bool divides(const SteinitzNumber& a, const SteinitzNumber& b);

}  // namespace hamlat
