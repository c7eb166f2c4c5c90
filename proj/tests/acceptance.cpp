// Acceptance suite: one PASS/FAIL line per criterion, each under its time limit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "hamlat/cartan.hpp"
#include "hamlat/chains.hpp"
#include "hamlat/hamming.hpp"
#include "hamlat/periodic.hpp"
#include "hamlat/steinitz.hpp"
#include "hamlat/tensor.hpp"
#include "json.hpp"
#include "support/cli_cases.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace hamlat;
using namespace hamlat::testing;

namespace {

// Collects failures; the first few are printed under the criterion line.
struct Failures {
  std::vector<std::string> items;
  void operator()(bool ok, const std::string& what) {
    if (!ok) items.push_back(what);
  }
};

struct Criterion {
  int number;
  std::string name;
  double limit_seconds;
  std::function<void(Failures&)> body;
};

void steinitz_laws(Failures& fail) {
  Rng rng(1001);
  for (int t = 0; t < 10000; ++t) {
    const auto a = random_steinitz(rng), b = random_steinitz(rng), c = random_steinitz(rng);
    fail(mul(a, b) == mul(b, a), "mul commutativity");
    fail(mul(mul(a, b), c) == mul(a, mul(b, c)), "mul associativity");
    fail(lcm(a, b) == lcm(b, a), "lcm commutativity");
    fail(lcm(lcm(a, b), c) == lcm(a, lcm(b, c)), "lcm associativity");
    fail(lcm(a, mul(a, b)) == mul(a, b) && lcm(a, a) == a, "lcm absorption");
    fail(divides(a, lcm(a, b)) && divides(b, lcm(a, b)), "lcm upper bound");
    const auto x = random_finite_steinitz(rng), y = random_finite_steinitz(rng);
    const mpz_class nx = natural_value(x), ny = natural_value(y);
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), nx.get_mpz_t(), ny.get_mpz_t());
    fail(mul(x, y).to_natural() == nx * ny, "finite mul vs big integers");
    fail(lcm(x, y).to_natural() == l, "finite lcm vs big integers");
    fail(divides(x, y) == (mpz_divisible_p(ny.get_mpz_t(), nx.get_mpz_t()) != 0), "finite divides vs big integers");
  }
}

void rank_axioms(Failures& fail) {
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto r = check_rank_axioms(StandardSpace(n), 20000, n);
    fail(r.ok(), "axiom violation in H_" + std::to_string(n));
    fail(r.exhaustive_elements && r.elements_checked == (std::size_t{1} << n), "elements of H_" + std::to_string(n));
    fail(r.exhaustive_pairs == (n <= 8), "pair mode of H_" + std::to_string(n));
  }
}

void tensor_iso(Failures& fail) {
  for (std::size_t n = 1; n <= 16; ++n) {
    for (std::size_t m = 1; n * m <= 16; ++m) {
      fail(tensor_space_iso(n, m).ok(), "H_" + std::to_string(n) + " (x) H_" + std::to_string(m));
    }
  }
  Rng rng(1003);
  for (int t = 0; t < 10000; ++t) {
    std::size_t n = uniform(rng, 1, 64);
    std::size_t m = uniform(rng, 1, 256 / n);
    const auto a = random_element(rng, n), b = random_element(rng, m);
    const auto x = tensor_element(a, b);
    bool pattern = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) pattern &= x.test(i * m + j) == (a.test(i) && b.test(j));
    fail(pattern, "tensor pattern");
    fail(rank(x).value() == rank(a).value() * rank(b).value(), "rank multiplicativity");

    // A sum over products of cover members, ranked through coarse and refined covers.
    n = uniform(rng, 1, 16);
    m = uniform(rng, 1, 256 / n);
    const auto e1 = random_partition_cover(rng, n), e2 = random_partition_cover(rng, m);
    const auto r1 = common_refinement(e1, random_partition_cover(rng, n));
    const auto r2 = common_refinement(e2, random_partition_cover(rng, m));
    HElement y = StandardSpace(n * m).zero();
    for (const auto& e : e1.members())
      for (const auto& f : e2.members())
        if (coin(rng)) y = y + tensor_element(e, f);
    const auto cmp = refine_and_compare(y, e1, e2, r1, r2);
    fail(cmp.agree() && cmp.first == rank(y), "rank_via_cover under refinement");
    fail(rank_via_cover(y, e1, e2).value() == ratio(printed_weight(y), n * m), "rank_via_cover vs weight");
  }
}

void lemma1(Failures& fail) {
  Rng rng(1004);
  for (std::size_t s = 1; s <= 16; ++s) {
    for (std::size_t n = 1; n <= s; ++n) {
      if (s % n != 0) continue;
      const std::size_t q = s / n;
      for (int t = 0; t < 100; ++t) {
        const auto e = random_embedding(rng, n, s);
        const auto f = factor_complement(e);
        const std::string tag = std::to_string(n) + "->" + std::to_string(s);
        fail(f.ok() && f.generators.size() == q && f.complement_atoms == q, "factorization " + tag);
        // Nonzero, pairwise disjoint generators summing to 1 are the atoms of a
        // subalgebra with 2^q elements.
        HElement sum = StandardSpace(s).zero();
        bool disjoint = true;
        for (std::size_t j = 0; j < f.generators.size(); ++j) {
          disjoint &= !f.generators[j].is_zero();
          for (std::size_t k = 0; k < j; ++k) disjoint &= (f.generators[j] * f.generators[k]).is_zero();
          sum = sum + f.generators[j];
          fail(rank(f.generators[j]).value() == ratio(n, s), "rank of f_j " + tag);
        }
        fail(disjoint && sum.is_one(), "complement atoms " + tag);
        std::set<std::size_t> hit;
        for (std::size_t i = 0; i < n; ++i) {
          const auto block = e.image(StandardSpace(n).atom(i));
          for (std::size_t j = 0; j < q; ++j) {
            const auto atom = block * f.generators[j];
            fail(atom.weight() == 1 && atom.test(f.pairing[i][j]), "pairing " + tag);
            hit.insert(f.pairing[i][j]);
          }
        }
        fail(hit.size() == s, "pairing bijection " + tag);
      }
    }
  }
}

void theorem1(Failures& fail) {
  Rng rng(1005);
  std::size_t rebuilt = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto c = random_chain(rng, 6, 1'000'000);
    const auto d = decompose_chain(c);
    fail(d.product() == mpz_class(static_cast<unsigned long>(c.top())), "prime product");
    for (auto p : d.primes) fail(trial_prime(p), "non-prime factor");
    if (c.top() <= 16) {
      const auto r = tensor_rebuild(c);
      fail(r.ok(), "rebuild of top " + std::to_string(c.top()));
      std::set<std::size_t> image(r.atom_map.begin(), r.atom_map.end());
      fail(image.size() == c.top(), "rebuild bijection");
      ++rebuilt;
    }
  }
  fail(rebuilt > 0, "no small chains were rebuilt");
}

void st_identities(Failures& fail) {
  Rng rng(1006);
  for (int t = 0; t < 1000; ++t) {
    const auto u = random_steinitz(rng, 0.5);
    std::vector<std::uint64_t> ds;
    for (int k = 0; k < 4; ++k) {
      std::uint64_t d = 1;
      for (const auto& [p, e] : u.factors()) {
        const std::uint64_t cap = e.is_infinite() ? 4 : std::min<std::uint64_t>(e.value(), 4);
        for (std::uint64_t i = uniform(rng, 0, cap); i > 0 && d * p <= 4096; --i) d *= p;
      }
      ds.push_back(d);
    }
    const auto r = steinitz_truncation_check(u, ds);
    fail(r.ok() && divides(r.truncated, u), "truncation of " + u.to_string());
  }
  for (int t = 0; t < 1000; ++t) {
    const auto c1 = random_chain(rng, 4, 64), c2 = random_chain(rng, 4, 64);
    const auto r = st_multiplicativity_check(c1, c2);
    fail(r.ok(), "st multiplicativity");
    fail(r.product.to_natural() == mpz_class(static_cast<unsigned long>(c1.top() * c2.top())), "product value");
  }
}

template <class F>
void embedding_invariance_for(const F& field, std::uint64_t seed, Failures& fail) {
  Rng rng(seed);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = uniform(rng, 1, 6), m = uniform(rng, 1, 4);
    const auto a = random_matrix_mixed_rank(rng, field, n);
    const auto big = embed(a, m);
    fail(relative_rank(big) == relative_rank(a), "relative rank over " + field.name());
    std::size_t r = 0, rb = 0;
    if constexpr (std::is_same_v<F, PrimeField>) {
      r = column_rank(a);
      rb = column_rank(big);
    } else {
      r = bareiss_rank(a);
      rb = bareiss_rank(big);
    }
    fail(rb == r * m && relative_rank(a).value() == ratio(r, n), "rank oracle over " + field.name());
  }
}

void embedding_invariance(Failures& fail) {
  embedding_invariance_for(PrimeField(2), 1007, fail);
  embedding_invariance_for(PrimeField(3), 1008, fail);
  embedding_invariance_for(RationalField(), 1009, fail);
}

template <class F>
void idempotent_space_for(const F& field, std::uint64_t seed, Failures& fail) {
  Rng rng(seed);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int t = 0; t < 20; ++t) {
      const auto frame = t == 0 ? CartanFrame<F>::diagonal(field, n)
                                : CartanFrame<F>::conjugate_of_diagonal(random_invertible(rng, field, n));
      const auto r = idempotent_hamming_space(frame);
      fail(r.ok() && r.exhaustive_elements && r.exhaustive_pairs && r.elements_checked == (std::size_t{1} << n),
           "E(H) over " + field.name() + " n=" + std::to_string(n));
    }
  }
}

void idempotent_spaces(Failures& fail) {
  idempotent_space_for(PrimeField(2), 1010, fail);
  idempotent_space_for(RationalField(), 1011, fail);
  for (const auto& primes : std::vector<std::vector<std::uint64_t>>{{2}, {3}, {2, 3}, {2, 2, 3}}) {
    std::uint64_t prod = 1;
    for (auto p : primes) prod *= p;
    for (const auto& r : {theorem4_check(primes, PrimeField(2)).ok(), theorem4_check(primes, RationalField()).ok()}) {
      fail(r, "theorem4 for product " + std::to_string(prod));
    }
    const auto q = theorem4_check(primes, RationalField());
    fail(q.atoms_matched == prod && q.st_space == SteinitzNumber::from_natural(prod), "theorem4 atoms");
  }
}

template <class F>
void conjugacy_for(const F& field, std::size_t max_n, std::uint64_t seed, Failures& fail) {
  Rng rng(seed);
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (int t = 0; t < 200; ++t) {
      const auto h1 = CartanFrame<F>::conjugate_of_diagonal(random_invertible(rng, field, n));
      const auto h2 = CartanFrame<F>::conjugate_of_diagonal(random_invertible(rng, field, n));
      const auto x = conjugate_cartans(h1, h2);
      const auto xi = inverse(x);
      if (!xi) {
        fail(false, "singular conjugator");
        continue;
      }
      std::set<std::vector<typename F::Element>> got, want;
      for (const auto& e : h1.idempotents()) got.insert((*xi * e * x).entries());
      for (const auto& e : h2.idempotents()) want.insert(e.entries());
      fail(got == want, "conjugation over " + field.name() + " n=" + std::to_string(n));
    }
  }
}

void conjugacy(Failures& fail) {
  conjugacy_for(PrimeField(2), 4, 1012, fail);
  conjugacy_for(PrimeField(3), 4, 1013, fail);
  conjugacy_for(RationalField(), 3, 1014, fail);
}

void lemma2(Failures& fail) {
  for (auto [n, m] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 1}, {2, 2}, {3, 2}}) {
    const auto tag = std::to_string(n) + "," + std::to_string(m);
    const auto g = lemma2_witness(n, m, PrimeField(2));
    const auto q = lemma2_witness(n, m, RationalField());
    for (bool ok : {g.ok() && g.invertible && g.outside_span, q.ok() && q.invertible && q.outside_span}) {
      fail(ok, "witness " + tag);
    }
    fail(q.action.kind == NormalizerAction::Kind::Normalizes && !q.action.permutation_is_identity(), "action " + tag);
    fail(g.action.kind == NormalizerAction::Kind::Normalizes && !g.action.permutation_is_identity(), "action " + tag);
  }
}

void theorem3_finite(Failures& fail) {
  Theorem3Options opts;
  opts.exhaustive = true;
  const auto small = verify_theorem3(build_theorem3_chain({2, 4}, PrimeField(2)), 1, opts);
  fail(small.zero_violations() && small.checked == 6, "[2,4] exhaustive");
  fail(small.in_span == 1 && small.normalizes_then_moves == 1 && small.moves_at_k == 4, "[2,4] tallies");
  const auto chain = build_theorem3_chain({2, 4, 16}, PrimeField(2));
  fail(chain.ok(), "[2,4,16] chain invariants");
  const auto big = verify_theorem3(chain, 2, opts);
  fail(big.checked == 20160, "[2,4,16] checked " + std::to_string(big.checked));
  fail(big.zero_violations(), "[2,4,16] violations " + std::to_string(big.violations.size()));
}

void theorem3_rational(Failures& fail) {
  Theorem3Options opts;
  opts.samples = 1000;
  const auto chain = build_theorem3_chain({2, 4}, RationalField());
  fail(chain.ok(), "[2,4] over Q invariants");
  const auto r = verify_theorem3(chain, 1, opts);
  fail(r.checked == 1000 && r.zero_violations(), "[2,4] over Q sampled");
}

void cartan_counting(Failures& fail) {
  const auto a = count_cartans(2, PrimeField(2));
  const auto b = count_cartans(2, PrimeField(3));
  fail(a.ok() && a.enumerated == 3, "(2,2) count");
  fail(b.ok() && b.enumerated == 6, "(2,3) count");
}

void cli_contract(Failures& fail) {
  std::set<int> classes;
  for (const auto& c : cases()) {
    auto args = c.args;
    args.push_back("--json");
    const auto got = invoke(args);
    fail(got.code == c.exit_code, c.name + " exit code");
    fail(got.out == read_text(kGolden + "/" + c.name + ".json"), c.name + " golden output");
    if (c.exit_code == 2) {
      const auto j = nlohmann::json::parse(got.out);
      classes.insert(j["error"]["kind"] == "usage" ? 0 : j["error"]["kind"] == "input" ? 1 : 2);
    } else if (c.exit_code == 1) {
      classes.insert(3);
    }
  }
  fail(classes.size() == 4, "every failure class exercised");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Steinitz laws", 5, steinitz_laws},
      {2, "rank axioms on H_n, n <= 12", 30, rank_axioms},
      {3, "tensor multiplicativity and H_n (x) H_m = H_nm", 60, tensor_iso},
      {4, "complement factorization for s <= 16", 60, lemma1},
      {5, "prime decomposition round-trip", 60, theorem1},
      {6, "Steinitz truncations and multiplicativity", 10, st_identities},
      {7, "relative rank embedding invariance", 30, embedding_invariance},
      {8, "idempotent Hamming space and theorem4 lists", 30, idempotent_spaces},
      {9, "Cartan conjugacy", 60, conjugacy},
      {10, "normalizer witness", 5, lemma2},
      {11, "general Cartan chains over GF(2)", 600, theorem3_finite},
      {11, "general Cartan chain over Q", 30, theorem3_rational},
      {12, "Cartan counting oracle", 10, cartan_counting},
      {13, "CLI contract", 10, cli_contract},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Failures fail;
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.body(fail);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool ok = fail.items.empty() && error.empty() && in_time;
    std::printf("%s criterion %d: %s (%.2f s, limit %.0f s)\n", ok ? "PASS" : "FAIL", c.number, c.name.c_str(), secs,
                c.limit_seconds);
    if (!error.empty()) std::printf("    exception: %s\n", error.c_str());
    if (!in_time) std::printf("    over the time limit\n");
    for (std::size_t i = 0; i < fail.items.size() && i < 5; ++i) std::printf("    %s\n", fail.items[i].c_str());
    if (fail.items.size() > 5) std::printf("    ... %zu failures in total\n", fail.items.size());
    std::fflush(stdout);
    failed += !ok;
  }
  return failed == 0 ? 0 : 1;
}
