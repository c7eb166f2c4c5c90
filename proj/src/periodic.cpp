#include "hamlat/periodic.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "hamlat/error.hpp"

namespace hamlat {
namespace {

std::string bits_to_string(const HElement::Bits& bits) {
  std::string out(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i] = '1';
  }
  return out;
}

HElement::Bits bits_from_string(std::string_view text) {
  HElement::Bits bits(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      bits.set(i);
    } else if (text[i] != '0') {
      throw std::invalid_argument("bit-string may only contain 0 and 1: '" + std::string(text) + "'");
    }
  }
  return bits;
}

std::size_t combined_period(const PeriodicSequence& a, const PeriodicSequence& b, std::size_t cap) {
  const std::size_t l = std::lcm(a.period(), b.period());
  if (l > cap) {
    throw ResourceLimitError("combined period " + std::to_string(l) + " exceeds the cap of " + std::to_string(cap));
  }
  return l;
}

}  // namespace

PeriodicSequence PeriodicSequence::normalize(const HElement::Bits& raw) {
  const std::size_t n = raw.size();
  if (n == 0) throw std::invalid_argument("periodic pattern must be nonempty");
  // Periods dividing n are closed under gcd, so the minimal one is reached by
  // stripping prime factors from n while the quotient is still a period.
  const auto is_period = [&](std::size_t d) { return (raw << d) == ((raw >> d) << d); };
  std::size_t p = n, rest = n;
  for (std::size_t q = 2; rest > 1; ++q) {
    if (q * q > rest) q = rest;
    if (rest % q != 0) continue;
    while (rest % q == 0) rest /= q;
    while (p % q == 0 && is_period(p / q)) p /= q;
  }
  HElement::Bits pattern = raw;
  pattern.resize(p);
  return PeriodicSequence(std::move(pattern));
}

PeriodicSequence PeriodicSequence::from_string(std::string_view pattern) {
  return normalize(bits_from_string(pattern));
}

HElement::Bits PeriodicSequence::window(std::size_t k) const {
  if (k == 0 || k % period() != 0) {
    throw std::invalid_argument(std::to_string(k) + " is not a period of a sequence with minimal period " +
                                std::to_string(period()));
  }
  HElement::Bits out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = pattern_[i % period()];
  return out;
}

std::string PeriodicSequence::to_string() const { return bits_to_string(pattern_); }

PeriodicSequence add(const PeriodicSequence& a, const PeriodicSequence& b, std::size_t period_cap) {
  const std::size_t l = combined_period(a, b, period_cap);
  return PeriodicSequence::normalize(a.window(l) ^ b.window(l));
}

PeriodicSequence mul(const PeriodicSequence& a, const PeriodicSequence& b, std::size_t period_cap) {
  const std::size_t l = combined_period(a, b, period_cap);
  return PeriodicSequence::normalize(a.window(l) & b.window(l));
}

Rank rank(const PeriodicSequence& a) {
  return Rank(static_cast<std::int64_t>(a.pattern().count()), static_cast<std::int64_t>(a.period()));
}

Rank rank_with_period(const PeriodicSequence& a, std::size_t k) {
  const auto w = a.window(k);
  return Rank(static_cast<std::int64_t>(w.count()), static_cast<std::int64_t>(k));
}

bool is_u_periodic(const PeriodicSequence& a, const SteinitzNumber& u) {
  return divides(SteinitzNumber::from_natural(a.period()), u);
}

PeriodicSequence embed_standard(const HElement& x) { return PeriodicSequence::normalize(x.bits()); }

EventuallyPeriodicSequence::EventuallyPeriodicSequence(const HElement::Bits& preperiod,
                                                       const PeriodicSequence& tail)
    : preperiod_(preperiod), tail_(tail) {
  // Absorb the last preperiod bit while it matches the bit that would precede the tail.
  while (!preperiod_.empty() && preperiod_[preperiod_.size() - 1] == tail_.at(tail_.period() - 1)) {
    const std::size_t p = tail_.period();
    HElement::Bits rotated(p);
    rotated[0] = tail_.at(p - 1);
    for (std::size_t i = 1; i < p; ++i) rotated[i] = tail_.at(i - 1);
    tail_ = PeriodicSequence::normalize(rotated);
    preperiod_.resize(preperiod_.size() - 1);
  }
}

EventuallyPeriodicSequence EventuallyPeriodicSequence::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || text.find(':', colon + 1) != std::string_view::npos) {
    throw std::invalid_argument("expected 'pre:tail', got '" + std::string(text) + "'");
  }
  const auto tail = text.substr(colon + 1);
  if (tail.empty()) throw std::invalid_argument("periodic tail must be nonempty");
  return {bits_from_string(text.substr(0, colon)), PeriodicSequence::from_string(tail)};
}

bool EventuallyPeriodicSequence::at(std::size_t i) const {
  return i < preperiod_.size() ? preperiod_[i] : tail_.at(i - preperiod_.size());
}

std::string EventuallyPeriodicSequence::to_string() const {
  return bits_to_string(preperiod_) + ":" + tail_.to_string();
}

Rank besicovitch_pseudorank(const EventuallyPeriodicSequence& a) { return rank(a.tail()); }

TruncationReport steinitz_truncation_check(const SteinitzNumber& u, std::span<const std::uint64_t> divisors) {
  TruncationReport report{u, SteinitzNumber(), false, {}, {}};
  for (auto d : divisors) {
    const auto sd = SteinitzNumber::from_natural(d);
    if (!divides(sd, u)) {
      throw std::invalid_argument(std::to_string(d) + " does not divide " + u.to_string());
    }
    report.truncated = lcm(report.truncated, sd);
  }
  report.divides_u = divides(report.truncated, u);

  // The image of atom i has a single 1 at residue i mod d; the images are
  // disjoint and sum to 1 exactly when those residues are 0..d-1 once each.
  std::map<std::uint64_t, bool> seen;
  for (auto d : divisors) {
    if (d > kMaxEmbeddingCheck) continue;
    if (const auto it = seen.find(d); it != seen.end()) {
      if (it->second) report.embedded.push_back(d);
      continue;
    }
    const StandardSpace space(d);
    std::vector<bool> hit(d, false);
    bool good = true;
    for (std::size_t i = 0; i < d && good; ++i) {
      const auto image = embed_standard(space.atom(i));
      const auto where = "atom " + std::to_string(i) + " of H_" + std::to_string(d);
      if (!is_u_periodic(image, u)) {
        report.violations.push_back(where + " is not u-periodic");
        good = false;
      } else if (rank(image) != Rank(1, static_cast<std::int64_t>(d))) {
        report.violations.push_back(where + " has rank " + rank(image).to_string());
        good = false;
      } else if (image.period() != d) {
        report.violations.push_back(where + " has period " + std::to_string(image.period()));
        good = false;
      } else {
        const auto residue = image.pattern().find_first();
        if (hit[residue]) {
          report.violations.push_back("images of the atoms of H_" + std::to_string(d) + " overlap");
          good = false;
        }
        hit[residue] = true;
      }
    }
    if (good && std::find(hit.begin(), hit.end(), false) != hit.end()) {
      report.violations.push_back("images of the atoms of H_" + std::to_string(d) + " do not sum to 1");
      good = false;
    }
    seen[d] = good;
    if (good) report.embedded.push_back(d);
  }
  return report;
}

}  // namespace hamlat
