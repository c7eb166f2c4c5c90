#include "hamlat/hamming.hpp"

#include <map>
#include <random>
#include <stdexcept>
#include <utility>

#include "hamlat/error.hpp"

namespace hamlat {
namespace {

void require_same_space(const HElement& a, const HElement& b, const char* op) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(op) + ": elements of H_" + std::to_string(a.size()) + " and H_" +
                                std::to_string(b.size()) + " do not combine");
  }
}

HElement from_mask(std::size_t n, std::uint64_t mask) {
  HElement::Bits bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = ((mask >> i) & 1U) != 0;
  return HElement(std::move(bits));
}

HElement random_element(std::size_t n, std::mt19937_64& rng) {
  HElement::Bits bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = (rng() & 1U) != 0;
  return HElement(std::move(bits));
}

constexpr std::size_t kMaxRecordedViolations = 64;

void record(AxiomReport& report, std::string axiom, std::string detail) {
  if (report.violations.size() < kMaxRecordedViolations) {
    report.violations.push_back({std::move(axiom), std::move(detail)});
  }
}

}  // namespace

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

Rank::Rank(Rational value) : value_(value) {
  if (value_ < Rational(0) || value_ > Rational(1)) throw std::domain_error("rank " + hamlat::to_string(value_) + " outside [0, 1]");
}

StandardSpace::StandardSpace(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("standard space needs n >= 1");
}

HElement StandardSpace::zero() const { return HElement(HElement::Bits(n_)); }

HElement StandardSpace::one() const {
  HElement::Bits bits(n_);
  bits.set();
  return HElement(std::move(bits));
}

HElement StandardSpace::atom(std::size_t i) const {
  if (i >= n_) throw std::out_of_range("atom index " + std::to_string(i) + " outside H_" + std::to_string(n_));
  HElement::Bits bits(n_);
  bits.set(i);
  return HElement(std::move(bits));
}

HElement::HElement(Bits bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw std::invalid_argument("element of H_0");
}

HElement HElement::from_string(std::string_view text) {
  Bits bits(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      bits.set(i);
    } else if (text[i] != '0') {
      throw std::invalid_argument("bit-string may only contain 0 and 1: '" + std::string(text) + "'");
    }
  }
  return HElement(std::move(bits));
}

HElement HElement::from_indices(std::size_t n, std::span<const std::size_t> indices) {
  Bits bits(n);
  for (auto i : indices) {
    if (i >= n) throw std::out_of_range("index " + std::to_string(i) + " outside H_" + std::to_string(n));
    bits.set(i);
  }
  return HElement(std::move(bits));
}

std::vector<std::size_t> HElement::support() const {
  std::vector<std::size_t> out;
  out.reserve(bits_.count());
  for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) out.push_back(i);
  return out;
}

std::string HElement::to_string() const {
  std::string out(bits_.size(), '0');
  for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) out[i] = '1';
  return out;
}

HElement HElement::complement() const { return HElement(~bits_); }

bool HElement::is_below(const HElement& b) const {
  require_same_space(*this, b, "order");
  return bits_.is_subset_of(b.bits_);
}

HElement operator+(const HElement& a, const HElement& b) {
  require_same_space(a, b, "add");
  return HElement(a.bits_ ^ b.bits_);
}

HElement operator*(const HElement& a, const HElement& b) {
  require_same_space(a, b, "mul");
  return HElement(a.bits_ & b.bits_);
}

bool operator<(const HElement& a, const HElement& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.bits_[i] != b.bits_[i]) return b.bits_[i];
  }
  return false;
}

HElement add(const HElement& a, const HElement& b) { return a + b; }
HElement mul(const HElement& a, const HElement& b) { return a * b; }

Rank rank(const HElement& a) {
  return Rank(static_cast<std::int64_t>(a.weight()), static_cast<std::int64_t>(a.size()));
}

Rank distance(const HElement& a, const HElement& b) { return rank(a + b); }

std::size_t counting_rank(const HElement& a) { return a.weight(); }

OrthogonalCover::OrthogonalCover(std::vector<HElement> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("orthogonal cover needs at least one member");
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].is_zero()) throw std::invalid_argument("orthogonal cover member " + std::to_string(i) + " is zero");
    for (std::size_t j = 0; j < i; ++j) {
      if (!(members_[i] * members_[j]).is_zero()) {
        throw std::invalid_argument("cover members " + std::to_string(j) + " and " + std::to_string(i) +
                                    " are not orthogonal");
      }
    }
  }
}

OrthogonalCover OrthogonalCover::atoms(StandardSpace space) {
  std::vector<HElement> members;
  members.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) members.push_back(space.atom(i));
  return OrthogonalCover(std::move(members));
}

std::vector<std::size_t> OrthogonalCover::members_below(const HElement& x) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].is_below(x)) out.push_back(i);
  }
  return out;
}

bool OrthogonalCover::covers(const HElement& x) const {
  if (x.size() != space().size()) return false;
  HElement sum = space().zero();
  for (const auto& e : members_) {
    const HElement xe = x * e;
    if (xe == e) {
      sum = sum + e;
    } else if (!xe.is_zero()) {
      return false;
    }
  }
  return sum == x;
}

OrthogonalCover orthogonal_cover(std::span<const HElement> elements) {
  if (elements.empty()) throw std::invalid_argument("orthogonal_cover needs at least one element");
  if (elements.size() > kMaxCoverInputs) {
    throw ResourceLimitError("orthogonal_cover enumerates 2^r products; r = " + std::to_string(elements.size()) +
                             " exceeds the cap of " + std::to_string(kMaxCoverInputs));
  }
  for (const auto& e : elements) require_same_space(elements.front(), e, "orthogonal_cover");

  // Depth-first over sign patterns; a zero partial product kills the whole subtree.
  std::vector<HElement> products;
  std::vector<HElement> stack{elements.front().space().one()};
  std::vector<std::size_t> depth{0};
  while (!stack.empty()) {
    HElement p = std::move(stack.back());
    const std::size_t d = depth.back();
    stack.pop_back();
    depth.pop_back();
    if (p.is_zero()) continue;
    if (d == elements.size()) {
      products.push_back(std::move(p));
      continue;
    }
    // Push the complement branch first so the a_i branch is visited first.
    stack.push_back(p * elements[d].complement());
    depth.push_back(d + 1);
    stack.push_back(p * elements[d]);
    depth.push_back(d + 1);
  }
  return OrthogonalCover(std::move(products));
}

OrthogonalCover common_refinement(const OrthogonalCover& a, const OrthogonalCover& b) {
  const std::size_t n = a.space().size();
  if (b.space().size() != n) throw std::invalid_argument("common_refinement: covers of different spaces");
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner_a(n, kNone), owner_b(n, kNone);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (auto k : a.members()[i].support()) owner_a[k] = i;
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (auto k : b.members()[i].support()) owner_b[k] = i;
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot;
  std::vector<HElement::Bits> classes;
  for (std::size_t k = 0; k < n; ++k) {
    auto [it, inserted] = slot.emplace(std::pair{owner_a[k], owner_b[k]}, classes.size());
    if (inserted) classes.emplace_back(n);
    classes[it->second].set(k);
  }
  std::vector<HElement> members;
  members.reserve(classes.size());
  for (auto& c : classes) members.emplace_back(std::move(c));
  return OrthogonalCover(std::move(members));
}

AxiomReport check_rank_axioms(StandardSpace space, std::size_t trials, std::uint64_t seed,
                              const RankFunction& rank_fn) {
  const RankFunction r = rank_fn ? rank_fn : RankFunction([](const HElement& a) { return rank(a).value(); });
  const std::size_t n = space.size();
  std::mt19937_64 rng(seed);
  AxiomReport report;
  report.n = n;

  auto check_element = [&](const HElement& a) {
    ++report.elements_checked;
    const Rational value = r(a);
    if (value < Rational(0) || value > Rational(1)) record(report, "range", a.to_string() + " has rank " + to_string(value));
    if ((value == Rational(0)) != a.is_zero()) {
      record(report, "axiom1", "r(" + a.to_string() + ") = " + to_string(value) + " breaks r(a)=0 iff a=0");
    }
    if ((value == Rational(1)) != a.is_one()) {
      record(report, "axiom2", "r(" + a.to_string() + ") = " + to_string(value) + " breaks r(a)=1 iff a=1");
    }
  };
  auto check_pair = [&](const HElement& a, const HElement& b) {
    ++report.pairs_checked;
    const Rational lhs = r(a + b);
    const Rational rhs = r(a) + r(b);
    if (lhs != rhs) {
      record(report, "axiom3",
             "r(" + a.to_string() + " + " + b.to_string() + ") = " + to_string(lhs) + " != " + to_string(rhs));
    }
  };

  if (n <= kExhaustiveElementLimit) {
    report.exhaustive_elements = true;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) check_element(from_mask(n, mask));
  } else {
    check_element(space.zero());
    check_element(space.one());
    for (std::size_t i = 0; i < n; ++i) {
      check_element(space.atom(i));
      check_element(space.atom(i).complement());
    }
    for (std::size_t t = 0; t < trials; ++t) check_element(random_element(n, rng));
  }

  if (n <= kExhaustivePairLimit) {
    report.exhaustive_pairs = true;
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t a = 0; a <= full; ++a) {
      const std::uint64_t free = full & ~a;
      // Every submask b of the complement of a, including 0.
      for (std::uint64_t b = free;; b = (b - 1) & free) {
        check_pair(from_mask(n, a), from_mask(n, b));
        if (b == 0) break;
      }
    }
  } else {
    for (std::size_t t = 0; t < trials; ++t) {
      const HElement a = random_element(n, rng);
      const HElement b = random_element(n, rng) * a.complement();
      check_pair(a, b);
    }
  }
  return report;
}

IdealSpace::IdealSpace(HElement h) : h_(std::move(h)), support_(h_.support()) {
  if (h_.is_zero()) throw std::invalid_argument("ideal space of the zero element");
}

Rank IdealSpace::rank(const HElement& a) const {
  if (!contains(a)) throw std::invalid_argument(a.to_string() + " is not in the ideal of " + h_.to_string());
  return Rank(Rational(hamlat::rank(a).value() / hamlat::rank(h_).value()));
}

HElement IdealSpace::compress(const HElement& a) const {
  if (a.size() != h_.size()) throw std::invalid_argument("compress: element from another space");
  HElement::Bits bits(support_.size());
  for (std::size_t i = 0; i < support_.size(); ++i) bits[i] = a.test(support_[i]);
  return HElement(std::move(bits));
}

HElement IdealSpace::expand(const HElement& compressed) const {
  if (compressed.size() != support_.size()) throw std::invalid_argument("expand: element of the wrong size");
  HElement::Bits bits(h_.size());
  for (std::size_t i = 0; i < support_.size(); ++i) bits[support_[i]] = compressed.test(i);
  return HElement(std::move(bits));
}

IdealSpace ideal_space(const HElement& h) { return IdealSpace(h); }

}  // namespace hamlat
