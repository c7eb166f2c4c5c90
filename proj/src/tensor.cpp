#include "hamlat/tensor.hpp"

#include <stdexcept>

#include "hamlat/error.hpp"

namespace hamlat {
namespace {

HElement from_mask(std::size_t n, std::uint64_t mask) {
  HElement::Bits bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = ((mask >> i) & 1U) != 0;
  return HElement(std::move(bits));
}

}  // namespace

HElement tensor_element(const HElement& a, const HElement& b) {
  const TensorIndexing idx{a.size(), b.size()};
  HElement::Bits bits(idx.size());
  const auto a_support = a.support();
  const auto b_support = b.support();
  for (auto i : a_support) {
    for (auto j : b_support) bits.set(idx.index(i, j));
  }
  return HElement(std::move(bits));
}

Rank rank_via_cover(const HElement& x, const OrthogonalCover& left, const OrthogonalCover& right) {
  const TensorIndexing idx{left.space().size(), right.space().size()};
  if (x.size() != idx.size()) {
    throw std::invalid_argument("rank_via_cover: element of H_" + std::to_string(x.size()) + " is not in H_" +
                                std::to_string(idx.n) + " (x) H_" + std::to_string(idx.m));
  }
  Rational total = 0;
  HElement reconstructed = StandardSpace(idx.size()).zero();
  for (const auto& e : left.members()) {
    for (const auto& f : right.members()) {
      const HElement product = tensor_element(e, f);
      const HElement overlap = x * product;
      if (overlap == product) {
        total += rank(e).value() * rank(f).value();
        reconstructed = reconstructed + product;
      } else if (!overlap.is_zero()) {
        throw std::domain_error("element " + x.to_string() + " is not a 0/1 combination over the given covers");
      }
    }
  }
  if (reconstructed != x) {
    throw std::domain_error("element " + x.to_string() + " lies outside Span(E1) (x) Span(E2)");
  }
  return Rank(total);
}

CoverComparison refine_and_compare(const HElement& x, const OrthogonalCover& e1, const OrthogonalCover& e2,
                                   const OrthogonalCover& e1_alt, const OrthogonalCover& e2_alt) {
  const Rank first = rank_via_cover(x, e1, e2);
  const Rank second = rank_via_cover(x, e1_alt, e2_alt);
  const Rank common = rank_via_cover(x, common_refinement(e1, e1_alt), common_refinement(e2, e2_alt));
  return {first, second, common};
}

TensorIsoReport tensor_space_iso(std::size_t n, std::size_t m) {
  const TensorIndexing idx{n, m};
  if (n == 0 || m == 0) throw std::invalid_argument("tensor_space_iso needs n, m >= 1");
  if (idx.size() > kTensorIsoExhaustiveLimit) {
    throw ResourceLimitError("tensor_space_iso enumerates 2^(nm) elements; nm = " + std::to_string(idx.size()) +
                             " exceeds " + std::to_string(kTensorIsoExhaustiveLimit));
  }
  TensorIsoReport report;
  report.n = n;
  report.m = m;
  auto fail = [&](std::string what) {
    if (report.violations.size() < 64) report.violations.push_back(std::move(what));
  };

  // The atom map (i, j) -> i*m + j is a bijection.
  std::vector<int> hit(idx.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const HElement t = tensor_element(StandardSpace(n).atom(i), StandardSpace(m).atom(j));
      if (t.weight() != 1) {
        fail("atom tensor (" + std::to_string(i) + "," + std::to_string(j) + ") is not an atom");
        continue;
      }
      ++hit[t.support().front()];
    }
  }
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (hit[k] != 1) fail("atom " + std::to_string(k) + " hit " + std::to_string(hit[k]) + " times");
  }

  const std::uint64_t count_a = std::uint64_t{1} << n;
  const std::uint64_t count_b = std::uint64_t{1} << m;
  for (std::uint64_t ma = 0; ma < count_a; ++ma) {
    const HElement a = from_mask(n, ma);
    for (std::uint64_t mb = 0; mb < count_b; ++mb) {
      const HElement b = from_mask(m, mb);
      const HElement t = tensor_element(a, b);
      ++report.pure_tensors_checked;
      if (rank(t).value() != rank(a).value() * rank(b).value()) {
        fail("rank(" + a.to_string() + " (x) " + b.to_string() + ") is not multiplicative");
      }
      // Complement of a pure tensor: 1 - a(x)b = (1-a)(x)1 + a(x)(1-b).
      const HElement lhs = t.complement();
      const HElement rhs = tensor_element(a.complement(), StandardSpace(m).one()) +
                           tensor_element(a, b.complement());
      if (lhs != rhs) fail("complement of " + a.to_string() + " (x) " + b.to_string() + " misplaced");
    }
  }

  // Multiplication of pure tensors is factorwise.
  for (std::uint64_t ma = 0; ma < count_a; ++ma) {
    for (std::uint64_t mb = 0; mb < count_b; ++mb) {
      const std::uint64_t ma2 = (ma * 2654435761ULL + 1) % count_a;
      const std::uint64_t mb2 = (mb * 40503ULL + 3) % count_b;
      const HElement a = from_mask(n, ma), a2 = from_mask(n, ma2);
      const HElement b = from_mask(m, mb), b2 = from_mask(m, mb2);
      if (tensor_element(a, b) * tensor_element(a2, b2) != tensor_element(a * a2, b * b2)) {
        fail("(a(x)b)(a'(x)b') != aa' (x) bb' at " + a.to_string() + "," + b.to_string());
      }
    }
  }

  // Every element of H_{nm} is a sum of atom tensors with the summed rank.
  const auto atoms_n = OrthogonalCover::atoms(StandardSpace(n));
  const auto atoms_m = OrthogonalCover::atoms(StandardSpace(m));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << idx.size()); ++mask) {
    const HElement x = from_mask(idx.size(), mask);
    ++report.sums_checked;
    HElement sum = StandardSpace(idx.size()).zero();
    Rational r = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (!x.test(k)) continue;
      const auto [i, j] = idx.split(k);
      sum = sum + tensor_element(atoms_n.members()[i], atoms_m.members()[j]);
      r += Rational(1, static_cast<std::int64_t>(n)) * Rational(1, static_cast<std::int64_t>(m));
    }
    if (sum != x) fail("element " + x.to_string() + " not reconstructed from atom tensors");
    if (rank(x).value() != r) fail("rank of " + x.to_string() + " differs from its atom-tensor sum");
  }
  return report;
}

}  // namespace hamlat
