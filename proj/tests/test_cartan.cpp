#include "hamlat/cartan.hpp"

#include <gtest/gtest.h>

#include <set>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace hamlat;
using hamlat::testing::ratio;
using hamlat::testing::Rng;

namespace {

const PrimeField gf2{2};
const PrimeField gf3{3};
const RationalField q{};

using MP = Matrix<PrimeField>;
using MQ = Matrix<RationalField>;

// All m x m matrices over GF(p), by brute force.
std::vector<MP> all_matrices(const PrimeField& f, std::size_t m) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < m * m; ++i) total *= f.order();
  std::vector<MP> out;
  for (std::size_t idx = 0; idx < total; ++idx) {
    MP x(f, m);
    std::size_t rest = idx;
    for (std::size_t k = 0; k < m * m; ++k) {
      x(k / m, k % m) = static_cast<std::uint32_t>(rest % f.order());
      rest /= f.order();
    }
    out.push_back(x);
  }
  return out;
}

// Cartan frames of M_2(GF(p)) as unordered pairs {e, 1 - e} of rank-1 idempotents.
std::size_t brute_cartan_count_m2(const PrimeField& f) {
  const auto one = MP::identity(f, 2);
  std::set<std::vector<std::uint32_t>> seen;
  std::size_t pairs = 0;
  for (const auto& e : all_matrices(f, 2)) {
    if (!(e * e == e) || hamlat::testing::column_rank(e) != 1) continue;
    const auto g = one - e;
    const auto key = std::min(e.entries(), g.entries());
    if (seen.insert(key).second) ++pairs;
  }
  return pairs;
}

std::size_t brute_gl_order(const PrimeField& f, std::size_t m) {
  std::size_t count = 0;
  for (const auto& x : all_matrices(f, m)) count += hamlat::testing::column_rank(x) == m;
  return count;
}

template <class F>
Matrix<F> conj(const Matrix<F>& x, const Matrix<F>& e) {
  return *inverse(x) * e * x;
}

}  // namespace

TEST(IsCartan, Examples) {
  const auto diag = CartanFrame<PrimeField>::diagonal(gf3, 4);
  EXPECT_TRUE(is_cartan<PrimeField>(diag.idempotents()).ok());
  const std::vector<MQ> just_identity{MQ::identity(q, 2)};
  EXPECT_FALSE(is_cartan<RationalField>(just_identity).ok());
  const std::vector<MQ> repeated{MQ::unit(q, 2, 0, 0), MQ::unit(q, 2, 0, 0)};
  const auto r = is_cartan<RationalField>(repeated);
  EXPECT_FALSE(r.ok());
  EXPECT_GE(r.diagnostics.size(), 2U);
  const std::vector<MQ> mixed{MQ::unit(q, 2, 0, 0), MQ::unit(q, 3, 1, 1)};
  EXPECT_THROW(is_cartan<RationalField>(mixed), std::invalid_argument);
  EXPECT_THROW(CartanFrame<RationalField>{repeated}, std::invalid_argument);
}

TEST(IdempotentSpace, Examples) {
  const auto one = CartanFrame<RationalField>::diagonal(q, 1);
  const auto r1 = idempotent_hamming_space(one);
  EXPECT_TRUE(r1.ok());
  EXPECT_EQ(r1.elements_checked, 2U);

  const auto d = CartanFrame<RationalField>::diagonal(q, 4);
  const auto e = MQ::unit(q, 4, 0, 0) + MQ::unit(q, 4, 1, 1);
  const auto f = MQ::unit(q, 4, 1, 1) + MQ::unit(q, 4, 2, 2);
  EXPECT_EQ(e * f, MQ::unit(q, 4, 1, 1));
  EXPECT_EQ(e + f - (e * f).scaled(2), MQ::unit(q, 4, 0, 0) + MQ::unit(q, 4, 2, 2));
  EXPECT_EQ(d.subset_of(e), HElement::from_string("1100"));
  EXPECT_EQ(d.element(HElement::from_string("0110")), f);
}

TEST(IdempotentSpace, ExhaustiveSmallFrames) {
  Rng rng(71);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int t = 0; t < 5; ++t) {
      const auto h2 = CartanFrame<PrimeField>::conjugate_of_diagonal(hamlat::testing::random_invertible(rng, gf2, n));
      const auto hq = CartanFrame<RationalField>::conjugate_of_diagonal(hamlat::testing::random_invertible(rng, q, n));
      const auto r2 = idempotent_hamming_space(h2), rq = idempotent_hamming_space(hq);
      EXPECT_TRUE(r2.ok());
      EXPECT_TRUE(rq.ok());
      EXPECT_TRUE(r2.exhaustive_elements && r2.exhaustive_pairs);
      EXPECT_EQ(rq.elements_checked, std::size_t{1} << n);
      // Independent rank check with the fraction-free oracle.
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const auto s = hamlat::testing::element_from_mask(n, mask);
        EXPECT_EQ(ratio(hamlat::testing::bareiss_rank(hq.element(s)), n), rank(s).value());
      }
    }
  }
}

TEST(ConjugateCartans, Examples) {
  const auto d = CartanFrame<RationalField>::diagonal(q, 2);
  const auto x = conjugate_cartans(d, d);
  EXPECT_TRUE(same_subalgebra(CartanFrame<RationalField>(conjugate_frame(x, d)), d));

  const auto g = MQ::from_ints(q, {{1, 1}, {0, 1}});
  const auto h2 = CartanFrame<RationalField>::conjugate_of_diagonal(g);
  const auto y = conjugate_cartans(d, h2);
  std::set<std::vector<mpq_class>> got, want;
  for (const auto& e : d.idempotents()) got.insert(conj(y, e).entries());
  for (const auto& e : h2.idempotents()) want.insert(e.entries());
  EXPECT_EQ(got, want);
}

template <class F>
void check_random_conjugacy(const F& field, std::size_t max_n, std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (int t = 0; t < 40; ++t) {
      const auto h1 = CartanFrame<F>::conjugate_of_diagonal(hamlat::testing::random_invertible(rng, field, n));
      const auto h2 = CartanFrame<F>::conjugate_of_diagonal(hamlat::testing::random_invertible(rng, field, n));
      const auto x = conjugate_cartans(h1, h2);
      ASSERT_TRUE(inverse(x).has_value());
      std::set<std::vector<typename F::Element>> got, want;
      for (const auto& e : h1.idempotents()) got.insert(conj(x, e).entries());
      for (const auto& e : h2.idempotents()) want.insert(e.entries());
      EXPECT_EQ(got, want);
    }
  }
}

TEST(ConjugateCartans, RandomGF2) { check_random_conjugacy(gf2, 4, 72); }
TEST(ConjugateCartans, RandomGF3) { check_random_conjugacy(gf3, 3, 73); }
TEST(ConjugateCartans, RandomQ) { check_random_conjugacy(q, 3, 74); }

TEST(TensorCartan, Examples) {
  const auto a = CartanFrame<PrimeField>::diagonal(gf3, 2), b = CartanFrame<PrimeField>::diagonal(gf3, 3);
  const auto t = tensor_cartan(a, b);
  EXPECT_TRUE(same_subalgebra(t, CartanFrame<PrimeField>::diagonal(gf3, 6)));
  EXPECT_EQ(t.n(), 6U);
  for (const auto& e : t.idempotents()) EXPECT_EQ(relative_rank(e), Rank(1, 6));
  EXPECT_TRUE(idempotent_hamming_space(t).ok());
  // e_i (x) f_j sits at row-major index i*m + j, like the tensor of Hamming atoms.
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const auto atom = tensor_element(HElement::from_indices(2, std::vector<std::size_t>{i}),
                                       HElement::from_indices(3, std::vector<std::size_t>{j}));
      EXPECT_EQ(t.subset_of(t[i * 3 + j]), atom);
    }
  }
}

TEST(NormalizerAction, Examples) {
  const auto d = CartanFrame<PrimeField>::diagonal(gf2, 2);
  EXPECT_EQ(normalizer_action(MP::identity(gf2, 2), d).kind, NormalizerAction::Kind::InFrameSpan);
  const auto swap = normalizer_action(MP::from_ints(gf2, {{0, 1}, {1, 0}}), d);
  EXPECT_EQ(swap.kind, NormalizerAction::Kind::Normalizes);
  EXPECT_EQ(swap.permutation, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(normalizer_action(MP::from_ints(gf2, {{1, 1}, {0, 1}}), d).kind, NormalizerAction::Kind::Moves);
  EXPECT_THROW(normalizer_action(MP(gf2, 2), d), std::domain_error);
  EXPECT_EQ(to_string(NormalizerAction::Kind::Moves), "moves");
}

TEST(Lemma2, Witnesses) {
  for (auto [n, m] : {std::pair<std::size_t, std::size_t>{2, 1}, {2, 2}, {3, 2}}) {
    const auto w2 = lemma2_witness(n, m, gf2);
    const auto wq = lemma2_witness(n, m, q);
    EXPECT_TRUE(w2.ok());
    EXPECT_TRUE(wq.ok());
    EXPECT_TRUE(wq.invertible && wq.outside_span);
    EXPECT_EQ(wq.action.kind, NormalizerAction::Kind::Normalizes);
    EXPECT_FALSE(wq.action.permutation_is_identity());
    // Cross-check the permutation by direct conjugation.
    for (std::size_t i = 0; i < n * m; ++i) {
      EXPECT_EQ(conj(wq.x, wq.frame[i]), wq.frame[wq.action.permutation[i]]);
    }
  }
  EXPECT_THROW(lemma2_witness(1, 3, q), std::invalid_argument);
}

TEST(CountCartans, MatchesBruteForceAndFormula) {
  EXPECT_EQ(brute_gl_order(gf2, 2), 6U);
  EXPECT_EQ(brute_gl_order(gf3, 2), 48U);
  EXPECT_EQ(general_linear_order(2, 2), 6);
  EXPECT_EQ(general_linear_order(4, 2), 20160);

  const auto c22 = count_cartans(2, gf2);
  EXPECT_TRUE(c22.ok());
  EXPECT_EQ(c22.enumerated, 3U);
  EXPECT_EQ(c22.rank_one_idempotents, 6U);
  EXPECT_EQ(c22.enumerated, brute_cartan_count_m2(gf2));

  const auto c23 = count_cartans(2, gf3);
  EXPECT_TRUE(c23.ok());
  EXPECT_EQ(c23.enumerated, 6U);
  EXPECT_EQ(c23.enumerated, brute_cartan_count_m2(gf3));

  for (const auto& f : {gf2, gf3}) {
    const auto c1 = count_cartans(1, f);
    EXPECT_EQ(c1.enumerated, 1U);
    EXPECT_TRUE(c1.ok());
  }
  EXPECT_THROW(count_cartans(4, PrimeField(5)), ResourceLimitError);
}

TEST(UnipotentFamily, PairwiseDistinctFrames) {
  const auto fam = unipotent_cartan_family(3, 6);
  ASSERT_EQ(fam.size(), 6U);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    EXPECT_TRUE(is_cartan<RationalField>(fam[i].idempotents()).ok());
    for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(same_subalgebra(fam[i], fam[j]));
  }
}

TEST(BuildTheorem3Chain, Examples) {
  const auto c2 = build_theorem3_chain({2, 4}, gf2);
  EXPECT_TRUE(c2.ok());
  ASSERT_EQ(c2.frames.size(), 2U);
  EXPECT_FALSE(same_subalgebra(c2.complements[0][0], c2.complements[0][1]));

  const auto cq = build_theorem3_chain({2, 4}, q);
  EXPECT_TRUE(cq.ok());
  EXPECT_TRUE(same_subalgebra(cq.complements[0][0], CartanFrame<RationalField>::diagonal(q, 2)));
  EXPECT_TRUE(same_subalgebra(cq.complements[0][1],
                              CartanFrame<RationalField>::conjugate_of_diagonal(MQ::from_ints(q, {{1, 1}, {0, 1}}))));

  EXPECT_THROW(build_theorem3_chain({2, 3}, gf2), std::invalid_argument);
  EXPECT_THROW(build_theorem3_chain({2, 6, 7}, q), std::invalid_argument);
  EXPECT_THROW(build_theorem3_chain({2, 2}, q), std::invalid_argument);
}

TEST(BuildTheorem3Chain, IntersectionByEnumeration) {
  // Over GF(2) the span of H_2 has 16 elements; exactly those of H_1 (x) I lie in M_2 (x) I.
  const auto c = build_theorem3_chain({2, 4}, gf2);
  std::size_t in_lower = 0;
  for (std::uint64_t mask = 0; mask < 16; ++mask) {
    const auto x = c.frames[1].element(hamlat::testing::element_from_mask(4, mask));
    bool of_form = false;
    for (const auto& a : all_matrices(gf2, 2)) of_form |= embed(a, 2) == x;
    if (of_form) {
      ++in_lower;
      std::set<std::vector<std::uint32_t>> h1;
      for (std::uint64_t s = 0; s < 4; ++s) {
        h1.insert(embed(c.frames[0].element(hamlat::testing::element_from_mask(2, s)), 2).entries());
      }
      EXPECT_TRUE(h1.count(x.entries()));
    }
  }
  EXPECT_EQ(in_lower, 4U);
}

TEST(VerifyTheorem3, ExhaustiveSmallChain) {
  const auto c = build_theorem3_chain({2, 4}, gf2);
  Theorem3Options opts;
  opts.exhaustive = true;
  const auto r = verify_theorem3(c, 1, opts);
  EXPECT_TRUE(r.zero_violations());
  EXPECT_EQ(r.checked, 6U);
  EXPECT_EQ(r.in_span, 1U);
  EXPECT_EQ(r.moves_at_k, 4U);
  EXPECT_EQ(r.normalizes_then_moves, 1U);

  opts.budget = 5;
  EXPECT_THROW(verify_theorem3(c, 1, opts), ResourceLimitError);
  EXPECT_THROW(verify_theorem3(c, 2, Theorem3Options{}), std::invalid_argument);
}

TEST(VerifyTheorem3, WorkersGiveTheSameReport) {
  const auto c = build_theorem3_chain({2, 4, 16}, gf2);
  ASSERT_TRUE(c.ok());
  Theorem3Options opts;
  opts.samples = 200;
  const auto one = verify_theorem3(c, 2, opts);
  opts.workers = 3;
  const auto three = verify_theorem3(c, 2, opts);
  EXPECT_TRUE(one.zero_violations());
  EXPECT_EQ(one.checked, three.checked);
  EXPECT_EQ(one.in_span, three.in_span);
  EXPECT_EQ(one.moves_at_k, three.moves_at_k);
  EXPECT_EQ(one.normalizes_then_moves, three.normalizes_then_moves);
}

TEST(VerifyTheorem3, SampledOverQ) {
  const auto c = build_theorem3_chain({2, 4}, q);
  Theorem3Options opts;
  opts.samples = 300;
  const auto r = verify_theorem3(c, 1, opts);
  EXPECT_TRUE(r.zero_violations());
  EXPECT_EQ(r.checked, 300U);
  EXPECT_EQ(r.in_span + r.moves_at_k + r.normalizes_then_moves, 300U);
}

TEST(SteinitzOfAlgebraChain, Examples) {
  EXPECT_EQ(steinitz_of_algebra_chain({2, 4, 8}), SteinitzNumber::from_natural(8));
  EXPECT_EQ(steinitz_of_algebra_chain({2, 6}), SteinitzNumber::from_natural(6));
  EXPECT_TRUE(steinitz_of_algebra_chain({1}).is_one());
}

TEST(Theorem4, Lists) {
  for (const auto& primes : std::vector<std::vector<std::uint64_t>>{{2}, {3}, {2, 3}, {2, 2, 3}}) {
    std::uint64_t prod = 1;
    for (auto p : primes) prod *= p;
    const auto r2 = theorem4_check(primes, gf2);
    const auto rq = theorem4_check(primes, q);
    EXPECT_TRUE(r2.ok());
    EXPECT_TRUE(rq.ok());
    EXPECT_EQ(rq.dimension, prod);
    EXPECT_EQ(rq.atoms_matched, prod);
    EXPECT_EQ(rq.st_space, SteinitzNumber::from_natural(prod));
  }
  EXPECT_EQ(theorem4_check({2, 3}, q).idempotents.elements_checked, 64U);
  EXPECT_EQ(theorem4_check({2, 3, 5}, q, 2).dimension, 6U);
  EXPECT_THROW(theorem4_check({5, 5, 3}, q), ResourceLimitError);
  EXPECT_THROW(theorem4_check({4}, q), std::invalid_argument);
}
