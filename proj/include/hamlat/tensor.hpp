#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hamlat/hamming.hpp"

namespace hamlat {

/// Row-major identification of H_n (x) H_m with H_{nm}: atom (i, j) is atom i*m + j.
struct TensorIndexing {
  std::size_t n;
  std::size_t m;

  std::size_t size() const { return n * m; }
  std::size_t index(std::size_t i, std::size_t j) const { return i * m + j; }
  std::pair<std::size_t, std::size_t> split(std::size_t k) const { return {k / m, k % m}; }
};

/// a (x) b in H_{nm}; bit (i, j) is a_i AND b_j.
HElement tensor_element(const HElement& a, const HElement& b);

/// Sum over alpha_ij r1(e_i) r2(f_j), with alpha_ij in {0, 1} recovered from
/// x (e_i (x) f_j). Throws std::domain_error when x is not a 0/1 combination
/// of the products e_i (x) f_j.
Rank rank_via_cover(const HElement& x, const OrthogonalCover& left, const OrthogonalCover& right);

struct CoverComparison {
  Rank first;
  Rank second;
  Rank common;

  bool agree() const { return first == second && second == common; }
};

/// Evaluates rank_via_cover over (E1, E2), over (E1', E2'), and over their
/// common refinement.
CoverComparison refine_and_compare(const HElement& x, const OrthogonalCover& e1, const OrthogonalCover& e2,
                                   const OrthogonalCover& e1_alt, const OrthogonalCover& e2_alt);

struct TensorIsoReport {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t pure_tensors_checked = 0;
  std::size_t sums_checked = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Largest nm for which tensor_space_iso enumerates everything.
inline constexpr std::size_t kTensorIsoExhaustiveLimit = 16;

/// Exhaustively checks that TensorIndexing is a rank-preserving Boolean
/// isomorphism H_n (x) H_m -> H_{nm}: over all pure tensors a (x) b, and over
/// every element of H_{nm} written as a sum of atom tensors.
TensorIsoReport tensor_space_iso(std::size_t n, std::size_t m);

}  // namespace hamlat
