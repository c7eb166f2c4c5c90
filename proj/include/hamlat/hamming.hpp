#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <boost/rational.hpp>

namespace hamlat {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& q);

/// Value of a rank function: an exact rational in [0, 1].
class Rank {
 public:
  Rank() = default;
  explicit Rank(Rational value);
  Rank(std::int64_t num, std::int64_t den) : Rank(Rational(num, den)) {}

  static Rank zero() { return Rank(); }
  static Rank one() { return Rank(Rational(1)); }

  const Rational& value() const { return value_; }
  std::string to_string() const { return hamlat::to_string(value_); }

  friend bool operator==(const Rank&, const Rank&) = default;
  friend bool operator<(const Rank& a, const Rank& b) { return a.value_ < b.value_; }

 private:
  Rational value_{0};
};

class HElement;

/// The standard Hamming space H_n: bit-vectors of length n with rank weight/n.
class StandardSpace {
 public:
  explicit StandardSpace(std::size_t n);

  std::size_t size() const { return n_; }
  HElement zero() const;
  HElement one() const;
  HElement atom(std::size_t i) const;

  friend bool operator==(StandardSpace, StandardSpace) = default;

 private:
  std::size_t n_;
};

/// An element of H_n. Elements of different spaces never combine; mixing them throws.
class HElement {
 public:
  using Bits = boost::dynamic_bitset<std::uint64_t>;

  explicit HElement(Bits bits);
  /// Parses "1010": coordinate 0 first, space size implied by the length.
  static HElement from_string(std::string_view bits);
  static HElement from_indices(std::size_t n, std::span<const std::size_t> indices);

  StandardSpace space() const { return StandardSpace(bits_.size()); }
  std::size_t size() const { return bits_.size(); }
  std::size_t weight() const { return bits_.count(); }
  bool test(std::size_t i) const { return bits_.test(i); }
  bool is_zero() const { return bits_.none(); }
  bool is_one() const { return bits_.all(); }
  const Bits& bits() const { return bits_; }
  std::vector<std::size_t> support() const;
  std::string to_string() const;

  /// 1 - a, which in characteristic 2 is 1 + a.
  HElement complement() const;
  /// a <= b in the Boolean order, i.e. ab = a.
  bool is_below(const HElement& b) const;

  friend HElement operator+(const HElement& a, const HElement& b);
  friend HElement operator*(const HElement& a, const HElement& b);
  friend bool operator==(const HElement& a, const HElement& b) = default;
  friend bool operator<(const HElement& a, const HElement& b);

 private:
  Bits bits_;
};

HElement add(const HElement& a, const HElement& b);
HElement mul(const HElement& a, const HElement& b);
Rank rank(const HElement& a);
/// d(a, b) = r(a - b) = r(a + b).
Rank distance(const HElement& a, const HElement& b);

/// The counting rank of the non-unital space of finite subsets: r(a) = #a.
std::size_t counting_rank(const HElement& a);

/// Pairwise-orthogonal nonzero elements of one space.
class OrthogonalCover {
 public:
  explicit OrthogonalCover(std::vector<HElement> members);

  /// The atoms of H_n, the finest cover.
  static OrthogonalCover atoms(StandardSpace space);

  const std::vector<HElement>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  StandardSpace space() const { return members_.front().space(); }

  /// x is covered when every member lies inside or outside x and x is the
  /// sum of the members inside it.
  bool covers(const HElement& x) const;
  /// Members e with xe = e.
  std::vector<std::size_t> members_below(const HElement& x) const;

 private:
  std::vector<HElement> members_;
};

/// Maximum number of inputs accepted by orthogonal_cover.
inline constexpr std::size_t kMaxCoverInputs = 20;

/// All nonzero products b_1 ... b_r with b_i = a_i or 1 - a_i. The result is
/// ordered by sign pattern, a_1 taken before 1 - a_1.
OrthogonalCover orthogonal_cover(std::span<const HElement> elements);

/// A cover refining both arguments: the nonzero classes of atoms grouped by
/// which member of each cover (if any) contains them.
OrthogonalCover common_refinement(const OrthogonalCover& a, const OrthogonalCover& b);

using RankFunction = std::function<Rational(const HElement&)>;

struct AxiomViolation {
  std::string axiom;
  std::string detail;
};

struct AxiomReport {
  std::size_t n = 0;
  bool exhaustive_elements = false;
  bool exhaustive_pairs = false;
  std::size_t elements_checked = 0;
  std::size_t pairs_checked = 0;
  std::vector<AxiomViolation> violations;

  bool ok() const { return violations.empty(); }
};

/// Elements are enumerated exhaustively up to this size, sampled beyond.
inline constexpr std::size_t kExhaustiveElementLimit = 12;
/// Orthogonal pairs (3^n of them) are enumerated up to this size, sampled beyond.
inline constexpr std::size_t kExhaustivePairLimit = 8;

/// Checks the three rank axioms: r(a) = 0 iff a = 0, r(a) = 1 iff a = 1, and
/// r(a + b) = r(a) + r(b) whenever ab = 0. `rank_fn` defaults to the standard rank.
AxiomReport check_rank_axioms(StandardSpace space, std::size_t trials, std::uint64_t seed,
                              const RankFunction& rank_fn = {});

/// The ideal hH with rank r_h(a) = r(a) / r(h); a unital space with identity h,
/// isomorphic to the standard space on the support of h.
class IdealSpace {
 public:
  explicit IdealSpace(HElement h);

  const HElement& identity() const { return h_; }
  StandardSpace ambient() const { return h_.space(); }
  StandardSpace compressed_space() const { return StandardSpace(support_.size()); }

  bool contains(const HElement& a) const { return (a * h_) == a; }
  /// a * h, the projection of an ambient element into the ideal.
  HElement project(const HElement& a) const { return a * h_; }
  /// Throws std::invalid_argument when a is not in hH.
  Rank rank(const HElement& a) const;
  /// Coordinates of a on the support of h.
  HElement compress(const HElement& a) const;
  HElement expand(const HElement& compressed) const;

 private:
  HElement h_;
  std::vector<std::size_t> support_;
};

IdealSpace ideal_space(const HElement& h);

}  // namespace hamlat
