#include "hamlat/chains.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace hamlat {
namespace {

std::string join_diagnostics(const EmbeddingReport& report) {
  std::string out;
  for (const auto& d : report.diagnostics) {
    if (!out.empty()) out += "; ";
    out += d.code + ": " + d.message;
  }
  return out;
}

std::string sizes_text(const std::vector<std::size_t>& sizes) {
  std::string out = "[";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(sizes[i]);
  }
  return out + "]";
}

HElement from_mask(std::size_t n, std::uint64_t mask) {
  HElement::Bits bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = ((mask >> i) & 1U) != 0;
  return HElement(std::move(bits));
}

}  // namespace

Embedding Embedding::canonical(std::size_t n, std::size_t s) {
  if (n == 0 || s == 0) throw std::invalid_argument("embedding sizes must be positive");
  if (s % n != 0) {
    throw std::invalid_argument("no unital embedding H_" + std::to_string(n) + " -> H_" + std::to_string(s) +
                                ": " + std::to_string(n) + " does not divide " + std::to_string(s));
  }
  return Embedding(n, s);
}

Embedding::Embedding(std::size_t n, std::size_t s, std::vector<std::vector<std::size_t>> blocks)
    : n_(n), s_(s), blocks_(std::move(blocks)) {
  if (n == 0 || s == 0) throw std::invalid_argument("embedding sizes must be positive");
  for (auto& b : blocks_) std::sort(b.begin(), b.end());
}

std::vector<std::size_t> Embedding::block(std::size_t i) const {
  if (i >= n_) throw std::out_of_range("block index " + std::to_string(i));
  if (!canonical_) return blocks_[i];
  std::vector<std::size_t> out(block_size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = i * block_size() + j;
  return out;
}

std::vector<std::vector<std::size_t>> Embedding::blocks() const {
  if (!canonical_) return blocks_;
  std::vector<std::vector<std::size_t>> out;
  out.reserve(n_);
  for (std::size_t i = 0; i < n_; ++i) out.push_back(block(i));
  return out;
}

std::vector<std::size_t> Embedding::owners() const {
  std::vector<std::size_t> out(s_);
  if (canonical_) {
    for (std::size_t t = 0; t < s_; ++t) out[t] = t / block_size();
    return out;
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    for (auto t : blocks_[i]) out.at(t) = i;
  }
  return out;
}

std::vector<std::size_t> Embedding::positions() const {
  std::vector<std::size_t> out(s_);
  if (canonical_) {
    for (std::size_t t = 0; t < s_; ++t) out[t] = t % block_size();
    return out;
  }
  for (const auto& b : blocks_) {
    for (std::size_t j = 0; j < b.size(); ++j) out.at(b[j]) = j;
  }
  return out;
}

HElement Embedding::image(const HElement& x) const {
  if (x.size() != n_) throw std::invalid_argument("embedding source is H_" + std::to_string(n_));
  HElement::Bits bits(s_);
  for (auto i : x.support()) {
    for (auto t : block(i)) bits.set(t);
  }
  return HElement(std::move(bits));
}

Embedding Embedding::then(const Embedding& next) const {
  if (next.n_ != s_) throw std::invalid_argument("cannot compose: target H_" + std::to_string(s_) +
                                                 " is not the source of the next embedding");
  if (canonical_ && next.canonical_) return canonical(n_, next.s_);
  std::vector<std::vector<std::size_t>> composed(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (auto a : block(i)) {
      const auto inner = next.block(a);
      composed[i].insert(composed[i].end(), inner.begin(), inner.end());
    }
  }
  return Embedding(n_, next.s_, std::move(composed));
}

bool operator==(const Embedding& a, const Embedding& b) {
  return a.n_ == b.n_ && a.s_ == b.s_ && a.blocks() == b.blocks();
}

EmbeddingReport validate_embedding(const Embedding& e) {
  EmbeddingReport report;
  auto add = [&](std::string code, std::string msg) { report.diagnostics.push_back({std::move(code), std::move(msg)}); };
  const std::size_t n = e.source_size();
  const std::size_t s = e.target_size();
  if (s % n != 0) {
    add("not_divisible", std::to_string(n) + " does not divide " + std::to_string(s));
    return report;
  }
  const auto blocks = e.blocks();
  if (blocks.size() != n) {
    add("block_count", std::to_string(blocks.size()) + " blocks for H_" + std::to_string(n));
    return report;
  }
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    if (blocks[i].size() != blocks[0].size()) {
      add("unequal_blocks", "block sizes " + std::to_string(blocks[0].size()) + " and " +
                                std::to_string(blocks[i].size()) + " unequal");
      break;
    }
  }
  std::vector<int> hits(s, 0);
  bool in_range = true;
  for (const auto& b : blocks) {
    for (auto t : b) {
      if (t >= s) {
        in_range = false;
        add("out_of_range", "atom " + std::to_string(t) + " outside H_" + std::to_string(s));
      } else {
        ++hits[t];
      }
    }
  }
  if (!in_range) return report;
  for (std::size_t t = 0; t < s; ++t) {
    if (hits[t] > 1) {
      add("overlap", "atom " + std::to_string(t) + " lies in " + std::to_string(hits[t]) + " blocks");
      break;
    }
  }
  for (std::size_t t = 0; t < s; ++t) {
    if (hits[t] == 0) {
      add("not_cover", "atom " + std::to_string(t) + " lies in no block");
      break;
    }
  }
  if (!report.ok()) return report;

  // Each atom of H_n must land on an element of rank 1/n, and 1 on 1.
  // The image of atom i is the sum of block i, so its rank is |block i| / s.
  const Rank expected(1, static_cast<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Rank r(static_cast<std::int64_t>(blocks[i].size()), static_cast<std::int64_t>(s));
    if (r != expected) add("rank", "image of atom " + std::to_string(i) + " has rank " + r.to_string());
  }
  if (!e.image(StandardSpace(n).one()).is_one()) add("rank", "image of 1 is not 1");
  return report;
}

ComplementFactorization factor_complement(const Embedding& e) {
  const auto validity = validate_embedding(e);
  if (!validity.ok()) throw std::invalid_argument("invalid embedding: " + join_diagnostics(validity));

  ComplementFactorization out;
  out.n = e.source_size();
  out.s = e.target_size();
  const std::size_t q = e.block_size();
  const StandardSpace target(out.s);
  const auto blocks = e.blocks();
  auto fail = [&](std::string what) {
    if (out.violations.size() < 64) out.violations.push_back(std::move(what));
  };

  for (std::size_t j = 0; j < q; ++j) {
    HElement::Bits bits(out.s);
    for (const auto& b : blocks) bits.set(b[j]);
    out.generators.emplace_back(std::move(bits));
  }

  // (a) the f_j are the atoms of the subalgebra they generate, each of rank n/s.
  const Rank expected_rank(static_cast<std::int64_t>(out.n), static_cast<std::int64_t>(out.s));
  for (std::size_t j = 0; j < q; ++j) {
    if (rank(out.generators[j]) != expected_rank) {
      fail("f_" + std::to_string(j) + " has rank " + rank(out.generators[j]).to_string());
    }
  }
  if (q <= kMaxCoverInputs) {
    const auto cover = orthogonal_cover(out.generators);
    out.complement_atoms = cover.size();
    auto members = cover.members();
    auto gens = out.generators;
    std::sort(members.begin(), members.end());
    std::sort(gens.begin(), gens.end());
    if (members != gens) fail("the generated subalgebra has atoms other than the f_j");
  } else {
    HElement sum = target.zero();
    for (const auto& f : out.generators) {
      if (!(sum * f).is_zero()) fail("generators overlap");
      sum = sum + f;
    }
    if (!sum.is_one()) fail("generators do not sum to 1");
    out.complement_atoms = q;
  }
  if (out.complement_atoms != q) {
    fail("complement subalgebra has " + std::to_string(out.complement_atoms) + " atoms, expected " +
         std::to_string(q));
  }

  // (b) (block_i, f_j) -> block_i * f_j is a bijection onto the atoms of H_s.
  std::vector<int> hits(out.s, 0);
  out.pairing.assign(out.n, std::vector<std::size_t>(q));
  const StandardSpace source(out.n);
  std::vector<HElement> block_elements;
  for (std::size_t i = 0; i < out.n; ++i) block_elements.push_back(e.image(source.atom(i)));
  for (std::size_t i = 0; i < out.n; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      const HElement product = block_elements[i] * out.generators[j];
      if (product.weight() != 1) {
        fail("block " + std::to_string(i) + " times f_" + std::to_string(j) + " is not an atom");
        continue;
      }
      const std::size_t atom = product.support().front();
      if (atom != blocks[i][j]) fail("e_" + std::to_string(i) + std::to_string(j) + " is misplaced");
      out.pairing[i][j] = atom;
      ++hits[atom];
    }
  }
  for (std::size_t t = 0; t < out.s; ++t) {
    if (hits[t] != 1) fail("atom " + std::to_string(t) + " is paired " + std::to_string(hits[t]) + " times");
  }

  // (c) every element is a sum of products (block element) * (complement element).
  // Elements are bit masks here; s is small enough for one word.
  if (out.s <= kFactorExhaustiveLimit && out.ok()) {
    auto mask_of = [](const HElement& x) {
      std::uint64_t m = 0;
      for (auto t : x.support()) m |= std::uint64_t{1} << t;
      return m;
    };
    std::vector<std::uint64_t> block_masks, generator_masks;
    for (const auto& b : block_elements) block_masks.push_back(mask_of(b));
    for (const auto& f : out.generators) generator_masks.push_back(mask_of(f));
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << out.s); ++x) {
      std::uint64_t sum = 0;
      for (std::size_t i = 0; i < out.n; ++i) {
        std::uint64_t complement_part = 0;
        for (std::size_t j = 0; j < q; ++j) {
          if ((x >> out.pairing[i][j]) & 1U) complement_part ^= generator_masks[j];
        }
        sum ^= block_masks[i] & complement_part;
      }
      if (sum != x) {
        fail("element " + from_mask(out.s, x).to_string() + " is not a sum of block-complement products");
        break;
      }
    }
  }
  return out;
}

EmbeddingReport check_chain(const std::vector<std::size_t>& sizes, const std::vector<Embedding>& embeddings) {
  EmbeddingReport report;
  auto add = [&](std::string code, std::string msg) { report.diagnostics.push_back({std::move(code), std::move(msg)}); };
  if (sizes.empty()) {
    add("empty", "a chain needs at least one level");
    return report;
  }
  for (auto n : sizes) {
    if (n == 0) {
      add("zero_size", "level sizes must be positive");
      return report;
    }
  }
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    if (sizes[i + 1] % sizes[i] != 0) {
      add("not_divisible", std::to_string(sizes[i]) + " does not divide " + std::to_string(sizes[i + 1]));
    }
  }
  if (!report.ok()) return report;
  if (embeddings.size() + 1 != sizes.size()) {
    add("embedding_count", std::to_string(embeddings.size()) + " embeddings for " + std::to_string(sizes.size()) +
                               " levels");
    return report;
  }
  bool all_canonical = true;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    const auto& e = embeddings[i];
    all_canonical = all_canonical && e.is_canonical();
    if (e.source_size() != sizes[i] || e.target_size() != sizes[i + 1]) {
      add("embedding_shape", "step " + std::to_string(i) + " maps H_" + std::to_string(e.source_size()) + " -> H_" +
                                 std::to_string(e.target_size()) + ", expected H_" + std::to_string(sizes[i]) +
                                 " -> H_" + std::to_string(sizes[i + 1]));
      continue;
    }
    const auto sub = validate_embedding(e);
    for (const auto& d : sub.diagnostics) add("embedding", "step " + std::to_string(i) + ": " + d.code + ": " + d.message);
  }
  if (!report.ok() || all_canonical || embeddings.empty()) return report;

  // Level-0 atoms must reach the top as a partition into equal blocks.
  Embedding composite = embeddings.front();
  for (std::size_t i = 1; i < embeddings.size(); ++i) composite = composite.then(embeddings[i]);
  const auto sub = validate_embedding(composite);
  for (const auto& d : sub.diagnostics) add("incompatible", d.code + ": " + d.message);
  return report;
}

ChainSpace::ChainSpace(std::vector<std::size_t> sizes, std::vector<Embedding> embeddings, bool complete)
    : sizes_(std::move(sizes)), embeddings_(std::move(embeddings)), complete_(complete) {
  const auto report = check_chain(sizes_, embeddings_);
  if (!report.ok()) throw std::invalid_argument("invalid chain " + sizes_text(sizes_) + ": " + join_diagnostics(report));
}

ChainSpace ChainSpace::canonical(std::vector<std::size_t> sizes, bool complete) {
  std::vector<Embedding> embeddings;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    if (sizes[i] == 0 || sizes[i + 1] % sizes[i] != 0) {
      throw std::invalid_argument("invalid chain " + sizes_text(sizes) + ": not a divisibility chain");
    }
    embeddings.push_back(Embedding::canonical(sizes[i], sizes[i + 1]));
  }
  return ChainSpace(std::move(sizes), std::move(embeddings), complete);
}

Embedding ChainSpace::to_top(std::size_t level) const {
  if (level >= sizes_.size()) throw std::out_of_range("chain level " + std::to_string(level));
  Embedding out = Embedding::canonical(sizes_[level], sizes_[level]);
  for (std::size_t i = level; i < embeddings_.size(); ++i) out = out.then(embeddings_[i]);
  return out;
}

mpz_class PrimeDecomposition::product() const {
  mpz_class out = 1;
  for (auto p : primes) out *= mpz_class(std::to_string(p));
  return out;
}

SteinitzNumber PrimeDecomposition::steinitz() const {
  SteinitzNumber out;
  for (auto p : primes) out = out * SteinitzNumber::from_natural(p);
  return out;
}

PrimeDecomposition decompose_chain(const ChainSpace& c) {
  PrimeDecomposition out;
  std::size_t previous = 1;
  for (auto n : c.sizes()) {
    for (const auto& [p, k] : factorize(n / previous)) out.primes.insert(out.primes.end(), k, p);
    previous = n;
  }
  return out;
}

SteinitzNumber steinitz_of_chain(const ChainSpace& c) {
  SteinitzNumber out;
  for (auto n : c.sizes()) out = lcm(out, SteinitzNumber::from_natural(n));
  return out;
}

TensorRebuild tensor_rebuild(const ChainSpace& c) {
  TensorRebuild out;
  out.decomposition = decompose_chain(c);
  const std::size_t top = c.top();
  const std::size_t steps = c.embeddings().size();
  auto fail = [&](std::string what) {
    if (out.violations.size() < 64) out.violations.push_back(std::move(what));
  };

  std::vector<std::vector<std::size_t>> owners(steps), positions(steps);
  for (std::size_t l = 0; l < steps; ++l) {
    owners[l] = c.embeddings()[l].owners();
    positions[l] = c.embeddings()[l].positions();
  }

  // Top atom t -> digits (atom at level 0, position at step 0, ..., position at
  // the last step), read as a row-major index over n_1, n_2/n_1, ....
  out.atom_map.assign(top, top);
  std::vector<std::size_t> walk(c.depth());
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> prefix_of, prefix_uses;
  for (auto n : c.sizes()) {
    prefix_of.emplace_back(n, kUnset);
    prefix_uses.emplace_back(n, 0);
  }
  for (std::size_t t = 0; t < top; ++t) {
    walk[c.depth() - 1] = t;
    std::vector<std::size_t> digits(steps);
    for (std::size_t l = steps; l-- > 0;) {
      digits[l] = positions[l][walk[l + 1]];
      walk[l] = owners[l][walk[l + 1]];
    }
    std::size_t v = walk[0];
    for (std::size_t l = 0; l < steps; ++l) v = v * (c.sizes()[l + 1] / c.sizes()[l]) + digits[l];
    if (out.atom_map[v] != top) {
      fail("product atom " + std::to_string(v) + " reached twice");
      continue;
    }
    out.atom_map[v] = t;
    // Top atoms below one level-l atom must share the leading digits of v, and
    // different level-l atoms must get different leading digits.
    for (std::size_t l = 0; l < c.depth(); ++l) {
      const std::size_t lead = v / (top / c.sizes()[l]);
      auto& slot = prefix_of[l][walk[l]];
      if (slot == kUnset) {
        slot = lead;
        if (++prefix_uses[l][lead] > 1) fail("level " + std::to_string(l) + " atoms share a leading factor");
      } else if (slot != lead) {
        fail("level " + std::to_string(l) + " atom " + std::to_string(walk[l]) + " spans several leading factors");
      }
    }
  }
  for (std::size_t v = 0; v < top; ++v) {
    if (out.atom_map[v] == top) fail("product atom " + std::to_string(v) + " unmatched");
  }
  if (out.decomposition.product() != top) fail("decomposition product differs from the top size");
  if (top > kRebuildExhaustiveLimit || !out.ok()) return out;

  // Factor generators 1 (x) .. (x) atom_d (x) .. (x) 1 of the tensor side.
  const auto& primes = out.decomposition.primes;
  std::vector<std::uint64_t> generators;
  std::size_t stride = top;
  for (auto p : primes) {
    stride /= p;
    for (std::size_t d = 0; d < p; ++d) {
      std::uint64_t mask = 0;
      for (std::size_t v = 0; v < top; ++v) {
        if ((v / stride) % p == d) mask |= std::uint64_t{1} << v;
      }
      generators.push_back(mask);
    }
  }
  auto image = [&](std::uint64_t mask) {
    HElement::Bits bits(top);
    for (std::size_t v = 0; v < top; ++v) {
      if ((mask >> v) & 1U) bits.set(out.atom_map[v]);
    }
    return HElement(std::move(bits));
  };
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << top); ++mask) {
    const HElement x = image(mask);
    if (rank(x) != rank(from_mask(top, mask))) fail("rank not preserved at " + std::to_string(mask));
    for (auto g : generators) {
      if (image(mask ^ g) != x + image(g) || image(mask & g) != x * image(g)) {
        fail("operations not preserved at " + std::to_string(mask));
        break;
      }
    }
  }
  return out;
}

std::string to_string(IsoVerdict v) {
  switch (v) {
    case IsoVerdict::IsomorphicTruncations:
      return "isomorphic_truncations";
    case IsoVerdict::Distinct:
      return "distinct";
    case IsoVerdict::UndecidedAtDepth:
      return "undecided_at_depth";
  }
  return "unknown";
}

IsoResult iso_test(const ChainSpace& c1, const ChainSpace& c2) {
  IsoResult out;
  out.first = steinitz_of_chain(c1);
  out.second = steinitz_of_chain(c2);
  if (out.first != out.second) {
    out.verdict = c1.complete() && c2.complete() ? IsoVerdict::Distinct : IsoVerdict::UndecidedAtDepth;
    return out;
  }
  out.verdict = IsoVerdict::IsomorphicTruncations;

  const auto r1 = tensor_rebuild(c1);
  const auto r2 = tensor_rebuild(c2);
  const auto& p1 = r1.decomposition.primes;
  const auto& p2 = r2.decomposition.primes;

  // Match the k-th copy of each prime in the first decomposition with the k-th in the second.
  std::vector<std::size_t> match(p1.size());
  std::map<std::uint64_t, std::vector<std::size_t>> slots;
  for (std::size_t i = p2.size(); i-- > 0;) slots[p2[i]].push_back(i);
  for (std::size_t i = 0; i < p1.size(); ++i) {
    auto& s = slots[p1[i]];
    match[i] = s.back();
    s.pop_back();
  }

  const std::size_t top = c1.top();
  std::vector<std::size_t> inverse1(top);
  for (std::size_t v = 0; v < top; ++v) inverse1[r1.atom_map[v]] = v;
  out.atom_bijection.resize(top);
  std::vector<std::size_t> digits1(p1.size()), digits2(p2.size());
  for (std::size_t t = 0; t < top; ++t) {
    std::size_t v = inverse1[t];
    for (std::size_t i = p1.size(); i-- > 0;) {
      digits1[i] = v % p1[i];
      v /= p1[i];
    }
    for (std::size_t i = 0; i < p1.size(); ++i) digits2[match[i]] = digits1[i];
    std::size_t v2 = 0;
    for (std::size_t i = 0; i < p2.size(); ++i) v2 = v2 * p2[i] + digits2[i];
    out.atom_bijection[t] = r2.atom_map[v2];
  }
  return out;
}

Embedding tensor_embedding(const Embedding& left, const Embedding& right) {
  const std::size_t t = right.target_size();
  std::vector<std::vector<std::size_t>> blocks;
  blocks.reserve(left.source_size() * right.source_size());
  for (std::size_t i = 0; i < left.source_size(); ++i) {
    const auto bi = left.block(i);
    for (std::size_t j = 0; j < right.source_size(); ++j) {
      const auto bj = right.block(j);
      std::vector<std::size_t> block;
      block.reserve(bi.size() * bj.size());
      for (auto a : bi) {
        for (auto b : bj) block.push_back(a * t + b);
      }
      blocks.push_back(std::move(block));
    }
  }
  return Embedding(left.source_size() * right.source_size(), left.target_size() * t, std::move(blocks));
}

ChainSpace tensor_chain(const ChainSpace& c1, const ChainSpace& c2) {
  const std::size_t depth = std::max(c1.depth(), c2.depth());
  auto size_at = [](const ChainSpace& c, std::size_t l) { return c.sizes()[std::min(l, c.depth() - 1)]; };
  auto step_at = [](const ChainSpace& c, std::size_t l) {
    return l < c.embeddings().size() ? c.embeddings()[l] : Embedding::canonical(c.top(), c.top());
  };
  std::vector<std::size_t> sizes;
  std::vector<Embedding> embeddings;
  for (std::size_t l = 0; l < depth; ++l) sizes.push_back(size_at(c1, l) * size_at(c2, l));
  for (std::size_t l = 0; l + 1 < depth; ++l) embeddings.push_back(tensor_embedding(step_at(c1, l), step_at(c2, l)));
  return ChainSpace(std::move(sizes), std::move(embeddings), c1.complete() && c2.complete());
}

MultiplicativityReport st_multiplicativity_check(const ChainSpace& c1, const ChainSpace& c2) {
  const auto product = tensor_chain(c1, c2);
  return {product.sizes(), steinitz_of_chain(product), steinitz_of_chain(c1) * steinitz_of_chain(c2)};
}

}  // namespace hamlat
