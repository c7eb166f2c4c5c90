#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hamlat/hamming.hpp"
#include "hamlat/steinitz.hpp"

namespace hamlat {

/// Default bound on any period produced while combining sequences.
inline constexpr std::size_t kDefaultPeriodCap = 1'000'000;

/// A periodic 0/1 sequence, stored as one window of its minimal period.
class PeriodicSequence {
 public:
  /// Minimal-period representative of raw_pattern repeated forever.
  static PeriodicSequence normalize(const HElement::Bits& raw_pattern);
  static PeriodicSequence from_string(std::string_view pattern);
  static PeriodicSequence zero() { return from_string("0"); }
  static PeriodicSequence one() { return from_string("1"); }

  std::size_t period() const { return pattern_.size(); }
  const HElement::Bits& pattern() const { return pattern_; }
  bool at(std::size_t i) const { return pattern_[i % pattern_.size()]; }
  bool is_zero() const { return pattern_.none(); }
  /// The first k terms; k must be a multiple of the period.
  HElement::Bits window(std::size_t k) const;
  std::string to_string() const;

  friend bool operator==(const PeriodicSequence&, const PeriodicSequence&) = default;

 private:
  explicit PeriodicSequence(HElement::Bits pattern) : pattern_(std::move(pattern)) {}
  HElement::Bits pattern_;
};

PeriodicSequence add(const PeriodicSequence& a, const PeriodicSequence& b,
                     std::size_t period_cap = kDefaultPeriodCap);
PeriodicSequence mul(const PeriodicSequence& a, const PeriodicSequence& b,
                     std::size_t period_cap = kDefaultPeriodCap);

/// weight(pattern) / period.
Rank rank(const PeriodicSequence& a);
/// (a_1 + ... + a_k) / k for any period k of a, not necessarily the minimal one.
Rank rank_with_period(const PeriodicSequence& a, std::size_t k);

/// The minimal period divides u.
bool is_u_periodic(const PeriodicSequence& a, const SteinitzNumber& u);

/// The sequence repeating x's bits; a unital rank-preserving embedding H_m -> H(u) for m | u.
PeriodicSequence embed_standard(const HElement& x);

/// A finite preperiod followed by a periodic tail, in canonical form: the
/// preperiod is as short as possible.
class EventuallyPeriodicSequence {
 public:
  EventuallyPeriodicSequence(const HElement::Bits& preperiod, const PeriodicSequence& tail);
  /// "pre:tail", e.g. "01:101"; a pure periodic sequence is written ":101".
  static EventuallyPeriodicSequence parse(std::string_view text);

  const HElement::Bits& preperiod() const { return preperiod_; }
  const PeriodicSequence& tail() const { return tail_; }
  bool at(std::size_t i) const;
  std::string to_string() const;

  friend bool operator==(const EventuallyPeriodicSequence&, const EventuallyPeriodicSequence&) = default;

 private:
  HElement::Bits preperiod_;
  PeriodicSequence tail_;
};

/// limsup of prefix averages, which for an eventually periodic sequence is the tail's rank.
Rank besicovitch_pseudorank(const EventuallyPeriodicSequence& a);

struct TruncationReport {
  SteinitzNumber u;
  SteinitzNumber truncated;  // lcm of the listed divisors
  bool divides_u = false;
  std::vector<std::uint64_t> embedded;  // each d whose H_d embedding was verified
  std::vector<std::string> violations;

  bool ok() const { return divides_u && violations.empty(); }
};

/// Largest divisor whose H_d embedding is verified atom by atom.
inline constexpr std::uint64_t kMaxEmbeddingCheck = 4096;

/// Throws std::invalid_argument if a listed integer does not divide u.
TruncationReport steinitz_truncation_check(const SteinitzNumber& u, std::span<const std::uint64_t> divisors);

}  // namespace hamlat
