#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hamlat/hamming.hpp"
#include "hamlat/steinitz.hpp"

namespace hamlat {

/// A unital rank-preserving embedding H_n -> H_s, given by sending atom i of
/// H_n to the sum of the target atoms in block i.
class Embedding {
 public:
  /// Consecutive blocks: atom i goes to {i*s/n, ..., (i+1)*s/n - 1}. Requires n | s.
  static Embedding canonical(std::size_t n, std::size_t s);
  /// Explicit blocks; validity is checked by validate_embedding, not here.
  Embedding(std::size_t n, std::size_t s, std::vector<std::vector<std::size_t>> blocks);

  std::size_t source_size() const { return n_; }
  std::size_t target_size() const { return s_; }
  bool is_canonical() const { return canonical_; }
  std::size_t block_size() const { return s_ / n_; }

  /// Block i in ascending atom order (explicit blocks are sorted on construction).
  std::vector<std::size_t> block(std::size_t i) const;
  std::vector<std::vector<std::size_t>> blocks() const;
  /// For each target atom, the source atom whose block contains it. Requires a valid embedding.
  std::vector<std::size_t> owners() const;
  /// Position of each target atom inside its block. Requires a valid embedding.
  std::vector<std::size_t> positions() const;

  HElement image(const HElement& x) const;
  /// this: H_n -> H_s followed by next: H_s -> H_t.
  Embedding then(const Embedding& next) const;

  friend bool operator==(const Embedding& a, const Embedding& b);

 private:
  Embedding(std::size_t n, std::size_t s) : n_(n), s_(s), canonical_(true) {}
  std::size_t n_;
  std::size_t s_;
  bool canonical_ = false;
  std::vector<std::vector<std::size_t>> blocks_;
};

struct Diagnostic {
  std::string code;
  std::string message;
};

struct EmbeddingReport {
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

/// Partition invariants plus the induced map being a unital rank-preserving
/// Boolean homomorphism. Diagnostic codes: not_divisible, block_count,
/// unequal_blocks, out_of_range, overlap, not_cover, rank.
EmbeddingReport validate_embedding(const Embedding& e);

/// The complement H' of H_n inside H_s with H_s = H_n H' ~ H_n (x) H'.
struct ComplementFactorization {
  std::size_t n = 0;
  std::size_t s = 0;
  /// f_j = sum_i e_ij, where e_ij is the j-th atom (ascending) of block i.
  std::vector<HElement> generators;
  /// pairing[i][j] = index of the atom e_ij = (image of atom i) * f_j.
  std::vector<std::vector<std::size_t>> pairing;
  /// Number of atoms of the subalgebra generated by the f_j; it has 2^this elements.
  std::size_t complement_atoms = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Targets up to this size also get the every-element decomposition check.
inline constexpr std::size_t kFactorExhaustiveLimit = 16;

/// Throws std::invalid_argument for an invalid embedding.
ComplementFactorization factor_complement(const Embedding& e);

/// Ascending chain H_{n_1} < H_{n_2} < ... < H_{n_k}, one embedding per step.
/// `complete` declares that no further levels exist.
class ChainSpace {
 public:
  /// Throws std::invalid_argument with the diagnostics of check_chain.
  ChainSpace(std::vector<std::size_t> sizes, std::vector<Embedding> embeddings, bool complete = false);
  static ChainSpace canonical(std::vector<std::size_t> sizes, bool complete = false);

  const std::vector<std::size_t>& sizes() const { return sizes_; }
  const std::vector<Embedding>& embeddings() const { return embeddings_; }
  bool complete() const { return complete_; }
  std::size_t depth() const { return sizes_.size(); }
  std::size_t top() const { return sizes_.back(); }

  /// Composite embedding of level `level` (0-based) into the top level.
  Embedding to_top(std::size_t level) const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<Embedding> embeddings_;
  bool complete_;
};

/// Diagnostic codes: empty, zero_size, not_divisible, embedding_count,
/// embedding_shape, embedding (with the nested code in the message), incompatible.
EmbeddingReport check_chain(const std::vector<std::size_t>& sizes, const std::vector<Embedding>& embeddings);

struct PrimeDecomposition {
  /// Factorizations of n_1, n_2/n_1, ..., each ascending, concatenated.
  std::vector<std::uint64_t> primes;

  mpz_class product() const;
  SteinitzNumber steinitz() const;
};

PrimeDecomposition decompose_chain(const ChainSpace& c);

/// lcm of the chain sizes, a truncation of the Steinitz number of the limit space.
SteinitzNumber steinitz_of_chain(const ChainSpace& c);

/// The re-tensoring isomorphism: atom_map[v] is the top-level atom matched to
/// atom v of H_{p_1} (x) ... (x) H_{p_r}, indexed row-major over the decomposition.
struct TensorRebuild {
  PrimeDecomposition decomposition;
  std::vector<std::size_t> atom_map;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Largest top size for which the rebuilt isomorphism is checked on every element.
inline constexpr std::size_t kRebuildExhaustiveLimit = 16;

/// Builds the isomorphism and checks that it is an atom bijection, that each
/// level's subspace is the span of its leading tensor factors, and (for
/// small tops) that it preserves rank and both operations on every element.
TensorRebuild tensor_rebuild(const ChainSpace& c);

enum class IsoVerdict { IsomorphicTruncations, Distinct, UndecidedAtDepth };

std::string to_string(IsoVerdict v);

struct IsoResult {
  IsoVerdict verdict = IsoVerdict::UndecidedAtDepth;
  SteinitzNumber first;
  SteinitzNumber second;
  /// For isomorphic truncations: top atom of the first chain -> top atom of the second.
  std::vector<std::size_t> atom_bijection;
};

IsoResult iso_test(const ChainSpace& c1, const ChainSpace& c2);

/// Embedding of H_n (x) H_m into H_s (x) H_t acting factorwise, under row-major indexing.
Embedding tensor_embedding(const Embedding& left, const Embedding& right);

/// Levels n_i m_i with factorwise embeddings; the shorter chain is padded
/// with identity steps at its top.
ChainSpace tensor_chain(const ChainSpace& c1, const ChainSpace& c2);

struct MultiplicativityReport {
  std::vector<std::size_t> product_sizes;
  SteinitzNumber product;
  SteinitzNumber expected;

  bool ok() const { return product == expected; }
};

MultiplicativityReport st_multiplicativity_check(const ChainSpace& c1, const ChainSpace& c2);

}  // namespace hamlat
