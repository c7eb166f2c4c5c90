#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hamlat/error.hpp"
#include "hamlat/field.hpp"
#include "hamlat/hamming.hpp"
#include "hamlat/matrix.hpp"
#include "hamlat/steinitz.hpp"
#include "hamlat/tensor.hpp"

namespace hamlat {

struct CartanCheck {
  std::vector<std::string> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

/// n pairwise orthogonal rank-1 idempotents of M_n summing to 1. Throws
/// std::invalid_argument when the matrices have mixed fields or dimensions.
template <ExactField F>
CartanCheck is_cartan(std::span<const Matrix<F>> frame) {
  CartanCheck out;
  auto add = [&](std::string d) { out.diagnostics.push_back(std::move(d)); };
  if (frame.empty()) {
    add("empty frame");
    return out;
  }
  const std::size_t n = frame.front().n();
  const F& field = frame.front().field();
  for (const auto& e : frame) {
    if (e.n() != n || !(e.field() == field)) throw std::invalid_argument("frame mixes dimensions or fields");
  }
  if (frame.size() != n) {
    add(std::to_string(frame.size()) + " idempotents in M_" + std::to_string(n) + ", expected " + std::to_string(n));
  }
  auto sum = Matrix<F>(field, n);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const auto& e = frame[i];
    if (!(e * e == e)) add("e_" + std::to_string(i) + " is not idempotent");
    if (rank(e) != 1) add("e_" + std::to_string(i) + " has rank " + std::to_string(rank(e)) + ", expected 1");
    for (std::size_t j = 0; j < i; ++j) {
      if (!(e * frame[j]).is_zero() || !(frame[j] * e).is_zero()) {
        add("e_" + std::to_string(j) + " and e_" + std::to_string(i) + " are not orthogonal");
      }
    }
    sum = sum + e;
  }
  if (!(sum == Matrix<F>::identity(field, n))) add("idempotents do not sum to the identity");
  return out;
}

/// A Cartan subalgebra of M_n, held as its frame of primitive idempotents.
template <ExactField F>
class CartanFrame {
 public:
  using Element = typename F::Element;

  explicit CartanFrame(std::vector<Matrix<F>> idempotents) : e_(std::move(idempotents)) {
    const auto check = is_cartan<F>(e_);
    if (!check.ok()) {
      std::string msg = "not a Cartan frame:";
      for (const auto& d : check.diagnostics) msg += " " + d + ";";
      throw std::invalid_argument(msg);
    }
  }

  /// The diagonal matrix units E_11, ..., E_nn.
  static CartanFrame diagonal(const F& field, std::size_t n) {
    std::vector<Matrix<F>> units;
    for (std::size_t i = 0; i < n; ++i) units.push_back(Matrix<F>::unit(field, n, i, i));
    return CartanFrame(std::move(units));
  }

  /// g E_ii g^{-1} for an invertible g.
  static CartanFrame conjugate_of_diagonal(const Matrix<F>& g) {
    const auto g_inv = inverse(g);
    if (!g_inv) throw std::domain_error("conjugating matrix is singular");
    std::vector<Matrix<F>> out;
    for (std::size_t i = 0; i < g.n(); ++i) out.push_back(g * Matrix<F>::unit(g.field(), g.n(), i, i) * *g_inv);
    return CartanFrame(std::move(out));
  }

  std::size_t n() const { return e_.size(); }
  const F& field() const { return e_.front().field(); }
  const std::vector<Matrix<F>>& idempotents() const { return e_; }
  const Matrix<F>& operator[](std::size_t i) const { return e_[i]; }

  /// Coordinates of x against the frame: tr(e_i x), since e x e = tr(e x) e for rank-1 e.
  std::vector<Element> coordinates(const Matrix<F>& x) const {
    std::vector<Element> out;
    out.reserve(e_.size());
    for (const auto& e : e_) out.push_back(trace(e * x));
    return out;
  }

  Matrix<F> combination(const std::vector<Element>& coefficients) const {
    Matrix<F> out(field(), n());
    for (std::size_t i = 0; i < e_.size(); ++i) {
      if (!field().is_zero(coefficients[i])) out = out + e_[i].scaled(coefficients[i]);
    }
    return out;
  }

  /// x lies in the span of the frame.
  bool contains(const Matrix<F>& x) const { return combination(coordinates(x)) == x; }

  /// The idempotent sum of e_i over the support of s.
  Matrix<F> element(const HElement& s) const {
    if (s.size() != n()) throw std::invalid_argument("subset of the wrong size for this frame");
    Matrix<F> out(field(), n());
    for (auto i : s.support()) out = out + e_[i];
    return out;
  }

  /// Inverse of element(): the subset S with x = sum_{i in S} e_i, if any.
  std::optional<HElement> subset_of(const Matrix<F>& x) const {
    const auto c = coordinates(x);
    HElement::Bits bits(n());
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (field().is_one(c[i])) {
        bits.set(i);
      } else if (!field().is_zero(c[i])) {
        return std::nullopt;
      }
    }
    HElement s(std::move(bits));
    if (!(element(s) == x)) return std::nullopt;
    return s;
  }

  /// Index of e within the frame.
  std::optional<std::size_t> index_of(const Matrix<F>& e) const {
    for (std::size_t i = 0; i < e_.size(); ++i) {
      if (e_[i] == e) return i;
    }
    return std::nullopt;
  }

 private:
  std::vector<Matrix<F>> e_;
};

/// Same Cartan subalgebra: equal frames as sets.
template <ExactField F>
bool same_subalgebra(const CartanFrame<F>& a, const CartanFrame<F>& b) {
  if (a.n() != b.n()) return false;
  auto x = a.idempotents();
  auto y = b.idempotents();
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

/// x^{-1} e x for each idempotent of the frame.
template <ExactField F>
std::vector<Matrix<F>> conjugate_frame(const Matrix<F>& x, const CartanFrame<F>& frame) {
  const auto x_inv = inverse(x);
  if (!x_inv) throw std::domain_error("conjugation by a singular matrix");
  std::vector<Matrix<F>> out;
  out.reserve(frame.n());
  for (const auto& e : frame.idempotents()) out.push_back(*x_inv * e * x);
  return out;
}

struct IdempotentSpaceReport {
  std::size_t n = 0;
  bool exhaustive_elements = false;
  bool exhaustive_pairs = false;
  std::size_t elements_checked = 0;
  std::size_t pairs_checked = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

inline constexpr std::size_t kIdempotentElementLimit = 12;
inline constexpr std::size_t kIdempotentPairLimit = 5;

/// Checks that S -> sum_{i in S} e_i is a Boolean isomorphism H_n -> E(H)
/// carrying the H_n rank to relative rank, with ef and e + f - 2ef as the
/// Boolean product and sum. Exhaustive for small n, seeded samples beyond.
template <ExactField F>
IdempotentSpaceReport idempotent_hamming_space(const CartanFrame<F>& frame, std::size_t samples = 256,
                                               std::uint64_t seed = 1) {
  const std::size_t n = frame.n();
  const F& field = frame.field();
  IdempotentSpaceReport out;
  out.n = n;
  auto fail = [&](std::string what) {
    if (out.violations.size() < 64) out.violations.push_back(std::move(what));
  };
  std::mt19937_64 rng(seed);
  auto subset = [&](std::uint64_t mask) {
    HElement::Bits bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = ((mask >> i) & 1U) != 0;
    return HElement(std::move(bits));
  };
  auto random_subset = [&] {
    HElement::Bits bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = (rng() & 1U) != 0;
    return HElement(std::move(bits));
  };

  std::vector<HElement> elements;
  if (n <= kIdempotentElementLimit) {
    out.exhaustive_elements = true;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) elements.push_back(subset(mask));
  } else {
    elements.push_back(StandardSpace(n).zero());
    elements.push_back(StandardSpace(n).one());
    for (std::size_t t = 0; t < samples; ++t) elements.push_back(random_subset());
  }
  for (const auto& s : elements) {
    ++out.elements_checked;
    const auto e = frame.element(s);
    if (!(e * e == e)) fail("e_S is not idempotent for S = " + s.to_string());
    if (relative_rank(e) != rank(s)) {
      fail("relative rank " + relative_rank(e).to_string() + " != " + rank(s).to_string() + " at " + s.to_string());
    }
    const auto back = frame.subset_of(e);
    if (!back || !(*back == s)) fail("e_S does not decode to S = " + s.to_string());
  }

  const auto two = field.from_int(2);
  auto check_pair = [&](const HElement& s, const HElement& t) {
    ++out.pairs_checked;
    const auto e = frame.element(s);
    const auto f = frame.element(t);
    const auto ef = e * f;
    if (!(ef == frame.element(s * t))) fail("ef != e_{S cap T} at " + s.to_string() + ", " + t.to_string());
    if (!(e + f - ef.scaled(two) == frame.element(s + t))) {
      fail("e + f - 2ef != e_{S xor T} at " + s.to_string() + ", " + t.to_string());
    }
  };
  if (n <= kIdempotentPairLimit) {
    out.exhaustive_pairs = true;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) check_pair(subset(a), subset(b));
    }
  } else {
    for (std::size_t t = 0; t < samples; ++t) check_pair(random_subset(), random_subset());
  }
  return out;
}

/// An invertible x with x^{-1} e_i x = f_i for every i. With v_i spanning the
/// image of e_i and w_i the image of f_i, x = V W^{-1} sends each w_i to v_i.
template <ExactField F>
Matrix<F> conjugate_cartans(const CartanFrame<F>& h1, const CartanFrame<F>& h2) {
  if (h1.n() != h2.n() || !(h1.field() == h2.field())) {
    throw std::invalid_argument("conjugate_cartans: frames of different sizes or fields");
  }
  const std::size_t n = h1.n();
  const F& field = h1.field();
  auto basis = [&](const CartanFrame<F>& h) {
    Matrix<F> out(field, n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = h[i];
      std::size_t col = 0;
      while (col < n) {
        bool nonzero = false;
        for (std::size_t r = 0; r < n && !nonzero; ++r) nonzero = !field.is_zero(e(r, col));
        if (nonzero) break;
        ++col;
      }
      for (std::size_t r = 0; r < n; ++r) out(r, i) = e(r, col);
    }
    return out;
  };
  const auto v = basis(h1);
  const auto w_inv = inverse(basis(h2));
  if (!w_inv) throw std::logic_error("image vectors of a Cartan frame are dependent");
  Matrix<F> x = v * *w_inv;
  const auto conjugated = conjugate_frame(x, h1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(conjugated[i] == h2[i])) throw std::logic_error("conjugation witness failed at index " + std::to_string(i));
  }
  return x;
}

/// {e_i (x) f_j}, ordered by TensorIndexing.
template <ExactField F>
CartanFrame<F> tensor_cartan(const CartanFrame<F>& h1, const CartanFrame<F>& h2) {
  if (!(h1.field() == h2.field())) throw std::invalid_argument("tensor_cartan: frames over different fields");
  std::vector<Matrix<F>> out;
  out.reserve(h1.n() * h2.n());
  for (const auto& e : h1.idempotents()) {
    for (const auto& f : h2.idempotents()) out.push_back(kron(e, f));
  }
  return CartanFrame<F>(std::move(out));
}

struct NormalizerAction {
  enum class Kind { InFrameSpan, Normalizes, Moves };
  Kind kind = Kind::Moves;
  /// For Normalizes: x^{-1} e_i x = e_{permutation[i]}.
  std::vector<std::size_t> permutation;

  bool permutation_is_identity() const {
    for (std::size_t i = 0; i < permutation.size(); ++i) {
      if (permutation[i] != i) return false;
    }
    return true;
  }
};

std::string to_string(NormalizerAction::Kind kind);

/// Classifies x against the frame: inside its span, permuting it, or moving
/// some idempotent off it. Throws std::domain_error for a singular x.
template <ExactField F>
NormalizerAction normalizer_action(const Matrix<F>& x, const CartanFrame<F>& frame) {
  if (x.n() != frame.n()) throw std::invalid_argument("normalizer_action: dimension mismatch");
  const auto conjugated = conjugate_frame(x, frame);
  NormalizerAction out;
  if (frame.contains(x)) {
    out.kind = NormalizerAction::Kind::InFrameSpan;
    return out;
  }
  for (const auto& c : conjugated) {
    const auto j = frame.index_of(c);
    if (!j) {
      out.kind = NormalizerAction::Kind::Moves;
      out.permutation.clear();
      return out;
    }
    out.permutation.push_back(*j);
  }
  out.kind = NormalizerAction::Kind::Normalizes;
  return out;
}

/// Cyclic shift P with P e_i = e_{i+1 mod n}.
template <ExactField F>
Matrix<F> cycle_matrix(const F& field, std::size_t n) {
  Matrix<F> p(field, n);
  for (std::size_t i = 0; i < n; ++i) p((i + 1) % n, i) = field.one();
  return p;
}

template <ExactField F>
struct Lemma2Witness {
  Matrix<F> x;
  CartanFrame<F> frame;
  NormalizerAction action;
  bool invertible = false;
  bool outside_span = false;

  bool ok() const {
    return invertible && outside_span && action.kind == NormalizerAction::Kind::Normalizes &&
           !action.permutation_is_identity();
  }
};

/// x = (cyclic shift of M_n) (x) I_m against the diagonal frame of M_n (x) M_m.
template <ExactField F>
Lemma2Witness<F> lemma2_witness(std::size_t n, std::size_t m, const F& field) {
  if (n < 2) throw std::invalid_argument("lemma2_witness needs n >= 2");
  if (m < 1) throw std::invalid_argument("lemma2_witness needs m >= 1");
  auto frame = tensor_cartan(CartanFrame<F>::diagonal(field, n), CartanFrame<F>::diagonal(field, m));
  auto x = embed(cycle_matrix(field, n), m);
  Lemma2Witness<F> out{x, frame, {}, inverse(x).has_value(), !frame.contains(x)};
  out.action = normalizer_action(x, frame);
  return out;
}

/// |GL_m(q)| = prod_{i<m} (q^m - q^i).
mpz_class general_linear_order(std::size_t m, std::uint64_t q);
/// |GL_m(q)| / ((q-1)^m m!), the number of Cartan subalgebras of M_m(GF(q)).
mpz_class cartan_count_formula(std::size_t m, std::uint64_t q);

/// Largest q^{m^2} that may be enumerated.
inline constexpr std::uint64_t kMatrixEnumerationCap = std::uint64_t{1} << 22;

/// Number of matrices in M_m(GF(q)); throws ResourceLimitError beyond the cap.
std::uint64_t matrix_space_size(std::size_t m, std::uint64_t q, std::uint64_t cap = kMatrixEnumerationCap);

/// The index-th matrix in lexicographic order of row-major entries.
Matrix<PrimeField> matrix_at(const PrimeField& field, std::size_t m, std::uint64_t index);

/// All rank-1 idempotents of M_m(GF(q)) in lexicographic entry order.
std::vector<Matrix<PrimeField>> rank_one_idempotents(const PrimeField& field, std::size_t m);

/// Enumerations with a larger limit refuse when the formula gives more frames than this.
inline constexpr std::uint64_t kFrameEnumerationCap = 100'000;

/// Cartan frames of M_m(GF(q)) as increasing tuples of rank_one_idempotents
/// indices, in lexicographic tuple order; at most `limit` of them.

std::vector<CartanFrame<PrimeField>> enumerate_cartan_frames(const PrimeField& field, std::size_t m,
                                                             std::size_t limit = static_cast<std::size_t>(-1));

struct CartanCount {
  std::size_t m = 0;
  std::uint64_t q = 0;
  std::size_t rank_one_idempotents = 0;
  std::size_t enumerated = 0;
  mpz_class formula;

  bool ok() const { return formula == enumerated; }
};

CartanCount count_cartans(std::size_t m, const PrimeField& field);

/// Frames of M_m(Q) conjugate to the diagonal by I + t E_12, t = 0, ..., count-1.
std::vector<CartanFrame<RationalField>> unipotent_cartan_family(std::size_t m, std::size_t count);

template <ExactField F>
struct GeneralCartanChain {
  F field;
  std::vector<std::size_t> sizes;
  /// frames[k] is a Cartan frame of M_{sizes[k]}.
  std::vector<CartanFrame<F>> frames;
  /// complements[k][i] is the frame of the centralizer M_{n_{k+1}/n_k} paired with e_i of frames[k].
  std::vector<std::vector<CartanFrame<F>>> complements;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// dim(span(frame) cap (M_n (x) I_m)) inside M_{nm}.
template <ExactField F>
std::size_t intersection_with_subalgebra(const CartanFrame<F>& frame, std::size_t n, std::size_t m) {
  const F& field = frame.field();
  std::vector<std::vector<typename F::Element>> frame_rows, all_rows;
  for (const auto& e : frame.idempotents()) frame_rows.push_back(e.entries());
  std::vector<std::vector<typename F::Element>> sub_rows;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) sub_rows.push_back(embed(Matrix<F>::unit(field, n, a, b), m).entries());
  }
  all_rows = frame_rows;
  all_rows.insert(all_rows.end(), sub_rows.begin(), sub_rows.end());
  return row_rank(field, frame_rows) + row_rank(field, sub_rows) - row_rank(field, all_rows);
}

/// Re-verifies every level: valid frames, H_k (x) I inside span(H_{k+1}), and
/// span(H_{k+1}) cap (A_k (x) I) of dimension n_k, i.e. equal to H_k.
template <ExactField F>
std::vector<std::string> check_general_cartan_chain(const GeneralCartanChain<F>& chain) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k + 1 < chain.frames.size(); ++k) {
    const std::size_t n = chain.sizes[k];
    const std::size_t m = chain.sizes[k + 1] / n;
    const auto& lower = chain.frames[k];
    const auto& upper = chain.frames[k + 1];
    if (!is_cartan<F>(upper.idempotents()).ok()) out.push_back("level " + std::to_string(k + 2) + " is not Cartan");
    for (std::size_t i = 0; i < lower.n(); ++i) {
      if (!upper.contains(embed(lower[i], m))) {
        out.push_back("e_" + std::to_string(i) + " of level " + std::to_string(k + 1) + " leaves level " +
                      std::to_string(k + 2));
      }
    }
    const auto dim = intersection_with_subalgebra(upper, n, m);
    if (dim != n) {
      out.push_back("H_" + std::to_string(k + 2) + " cap A_" + std::to_string(k + 1) + " has dimension " +
                    std::to_string(dim) + ", expected " + std::to_string(n));
    }
  }
  return out;
}

/// H_1 diagonal; H_{k+1} = sum_i e_i (x) H'_i over n_k distinct Cartan frames
/// H'_i of the centralizer M_{n_{k+1}/n_k}. Finite fields require n_k^2 <= n_{k+1}.
template <ExactField F>
GeneralCartanChain<F> build_theorem3_chain(const std::vector<std::size_t>& sizes, const F& field) {
  if (sizes.empty()) throw std::invalid_argument("build_theorem3_chain needs at least one level");
  if (sizes.front() == 0) throw std::invalid_argument("level sizes must be positive");
  for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
    if constexpr (F::is_finite) {
      if (sizes[k] * sizes[k] > sizes[k + 1]) {
        throw std::invalid_argument("over a finite field each step needs n_k^2 <= n_{k+1}; " +
                                    std::to_string(sizes[k]) + "^2 > " + std::to_string(sizes[k + 1]));
      }
    }
    if (sizes[k + 1] % sizes[k] != 0) {
      throw std::invalid_argument(std::to_string(sizes[k]) + " does not divide " + std::to_string(sizes[k + 1]));
    }
  }

  GeneralCartanChain<F> chain{field, sizes, {CartanFrame<F>::diagonal(field, sizes.front())}, {}, {}};
  for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
    const std::size_t n = sizes[k];
    const std::size_t m = sizes[k + 1] / n;
    std::vector<CartanFrame<F>> picks;
    if constexpr (std::is_same_v<F, PrimeField>) {
      picks = enumerate_cartan_frames(field, m, n);
    } else {
      if (m < 2 && n > 1) {
        throw std::invalid_argument("M_1 has a single Cartan subalgebra; " + std::to_string(n) + " are needed");
      }
      picks = unipotent_cartan_family(m, n);
    }
    if (picks.size() < n) {
      throw std::invalid_argument("insufficient distinct Cartan subalgebras in M_" + std::to_string(m) + ": found " +
                                  std::to_string(picks.size()) + ", need " + std::to_string(n));
    }
    std::vector<Matrix<F>> next;
    const auto& lower = chain.frames.back();
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& f : picks[i].idempotents()) next.push_back(kron(lower[i], f));
    }
    chain.frames.emplace_back(std::move(next));
    chain.complements.push_back(std::move(picks));
  }
  chain.violations = check_general_cartan_chain(chain);
  return chain;
}

struct Theorem3Report {
  std::size_t level = 0;
  bool exhaustive = false;
  std::size_t checked = 0;
  std::size_t in_span = 0;
  std::size_t moves_at_k = 0;
  std::size_t normalizes_then_moves = 0;
  std::vector<std::string> violations;

  bool zero_violations() const { return violations.empty(); }
};

struct Theorem3Options {
  bool exhaustive = false;
  /// Exhaustive mode refuses when |GL_{n_k}(q)| exceeds this.
  std::uint64_t budget = 100'000;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::int64_t entry_bound = 3;
  std::size_t workers = 1;
};

/// Runs the trichotomy for one invertible x of A_k against the chain.
template <ExactField F>
void classify_for_theorem3(const GeneralCartanChain<F>& chain, std::size_t level, const Matrix<F>& x,
                           Theorem3Report& report, const std::string& label) {
  const auto& frame = chain.frames[level - 1];
  const auto& next = chain.frames[level];
  const std::size_t m = chain.sizes[level] / chain.sizes[level - 1];
  ++report.checked;
  const auto action = normalizer_action(x, frame);
  switch (action.kind) {
    case NormalizerAction::Kind::InFrameSpan:
      ++report.in_span;
      return;
    case NormalizerAction::Kind::Moves:
      ++report.moves_at_k;
      return;
    case NormalizerAction::Kind::Normalizes:
      break;
  }
  if (action.permutation_is_identity()) {
    report.violations.push_back(label + ": centralizes H_k without lying in it");
    return;
  }
  const auto lifted = normalizer_action(embed(x, m), next);
  if (lifted.kind == NormalizerAction::Kind::Moves) {
    ++report.normalizes_then_moves;
  } else {
    report.violations.push_back(label + ": normalizes H_k and still preserves H_{k+1}");
  }
}

inline void merge_into(Theorem3Report& total, Theorem3Report&& part) {
  total.checked += part.checked;
  total.in_span += part.in_span;
  total.moves_at_k += part.moves_at_k;
  total.normalizes_then_moves += part.normalizes_then_moves;
  for (auto& v : part.violations) total.violations.push_back(std::move(v));
}

/// Every invertible x of A_k (exhaustive, finite fields) or a seeded sample
/// must lie in H_k, move H_k, or normalize H_k and then move H_{k+1}.
/// `level` is 1-based and must have a level above it.
template <ExactField F>
Theorem3Report verify_theorem3(const GeneralCartanChain<F>& chain, std::size_t level, const Theorem3Options& opts) {
  if (level < 1 || level >= chain.frames.size()) {
    throw std::invalid_argument("verify_theorem3 needs 1 <= level < " + std::to_string(chain.frames.size()));
  }
  const std::size_t n = chain.sizes[level - 1];
  const std::size_t workers = std::max<std::size_t>(1, opts.workers);
  Theorem3Report report;
  report.level = level;
  report.exhaustive = opts.exhaustive;

  if (opts.exhaustive) {
    if constexpr (!std::is_same_v<F, PrimeField>) {
      throw std::invalid_argument("exhaustive verification needs a finite field");
    } else {
      const std::uint64_t q = chain.field.order();
      const mpz_class group = general_linear_order(n, q);
      if (group > mpz_class(std::to_string(opts.budget))) {
        throw ResourceLimitError("|GL_" + std::to_string(n) + "(" + std::to_string(q) + ")| = " + group.get_str() +
                                 " exceeds the budget of " + std::to_string(opts.budget));
      }
      const std::uint64_t total = matrix_space_size(n, q);
      // Contiguous slices keep the merged report in canonical enumeration order.
      auto run_slice = [&](std::uint64_t begin, std::uint64_t end) {
        Theorem3Report part;
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          const auto x = matrix_at(chain.field, n, idx);
          if (!inverse(x)) continue;
          classify_for_theorem3(chain, level, x, part, "x#" + std::to_string(idx));
        }
        return part;
      };
      std::vector<std::future<Theorem3Report>> parts;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::uint64_t begin = total * w / workers;
        const std::uint64_t end = total * (w + 1) / workers;
        parts.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async, run_slice, begin, end));
      }
      for (auto& p : parts) merge_into(report, p.get());
    }
    return report;
  }

  std::mt19937_64 rng(opts.seed);
  std::vector<Matrix<F>> sample;
  sample.reserve(opts.samples);
  while (sample.size() < opts.samples) {
    Matrix<F> x(chain.field, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) x(i, j) = chain.field.random(rng, opts.entry_bound);
    }
    if (inverse(x)) sample.push_back(std::move(x));
  }
  auto run_slice = [&](std::size_t begin, std::size_t end) {
    Theorem3Report part;
    for (std::size_t i = begin; i < end; ++i) {
      classify_for_theorem3(chain, level, sample[i], part, "sample#" + std::to_string(i));
    }
    return part;
  };
  std::vector<std::future<Theorem3Report>> parts;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = sample.size() * w / workers;
    const std::size_t end = sample.size() * (w + 1) / workers;
    parts.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async, run_slice, begin, end));
  }
  for (auto& p : parts) merge_into(report, p.get());
  return report;
}

/// from_natural(n_k) for a divisibility chain; a truncation of st(A).
SteinitzNumber steinitz_of_algebra_chain(const std::vector<std::size_t>& sizes);

struct Theorem4Report {
  std::vector<std::uint64_t> primes;
  std::size_t dimension = 0;
  SteinitzNumber st_space;
  SteinitzNumber st_algebra;
  IdempotentSpaceReport idempotents;
  std::size_t atoms_matched = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty() && idempotents.ok() && st_space == st_algebra; }
};

inline constexpr std::size_t kTheorem4DimensionCap = 64;

/// A = M_{p_1} (x) ... (x) M_{p_d} with D the tensor of diagonal frames:
/// E(D) matches H_{p_1} (x) ... (x) H_{p_d} atom by atom with exact ranks, and
/// the Steinitz truncations of both sides agree. depth 0 uses every prime.
template <ExactField F>
Theorem4Report theorem4_check(const std::vector<std::uint64_t>& primes, const F& field, std::size_t depth = 0) {
  if (primes.empty()) throw std::invalid_argument("theorem4_check needs at least one prime");
  if (depth > primes.size()) throw std::invalid_argument("depth exceeds the number of primes");
  Theorem4Report out;
  out.primes.assign(primes.begin(), primes.begin() + static_cast<std::ptrdiff_t>(depth == 0 ? primes.size() : depth));
  std::size_t dim = 1;
  for (auto p : out.primes) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    dim *= p;
    if (dim > kTheorem4DimensionCap) {
      throw ResourceLimitError("product of primes exceeds " + std::to_string(kTheorem4DimensionCap));
    }
  }
  out.dimension = dim;

  std::optional<CartanFrame<F>> frame;
  std::vector<std::size_t> algebra_sizes;
  for (auto p : out.primes) {
    auto d = CartanFrame<F>::diagonal(field, p);
    frame = frame ? tensor_cartan(*frame, d) : d;
    algebra_sizes.push_back(frame->n());
  }

  // Atom k of the tensor of standard spaces is the tensor of factor atoms with
  // the row-major digits of k; it must match the k-th idempotent of D.
  for (std::size_t k = 0; k < dim; ++k) {
    std::optional<HElement> atom;
    std::optional<Matrix<F>> idempotent;
    std::size_t rest = k, stride = dim;
    for (auto p : out.primes) {
      stride /= p;
      const std::size_t digit = rest / stride;
      rest %= stride;
      const auto factor_atom = StandardSpace(p).atom(digit);
      atom = atom ? tensor_element(*atom, factor_atom) : factor_atom;
      const auto unit = Matrix<F>::unit(field, p, digit, digit);
      idempotent = idempotent ? kron(*idempotent, unit) : unit;
    }
    if (!(frame->element(*atom) == *idempotent) || !((*frame)[k] == *idempotent)) {
      out.violations.push_back("atom " + std::to_string(k) + " does not match its idempotent");
    } else if (relative_rank(*idempotent) != rank(*atom)) {
      out.violations.push_back("atom " + std::to_string(k) + " rank mismatch");
    } else {
      ++out.atoms_matched;
    }
  }
  out.idempotents = idempotent_hamming_space(*frame);

  std::size_t running = 1;
  SteinitzNumber st_space;
  for (auto p : out.primes) {
    running *= p;
    st_space = lcm(st_space, SteinitzNumber::from_natural(running));
  }
  out.st_space = st_space;
  out.st_algebra = steinitz_of_algebra_chain(algebra_sizes);
  if (out.st_space != out.st_algebra) out.violations.push_back("Steinitz truncations differ");
  return out;
}

}  // namespace hamlat
