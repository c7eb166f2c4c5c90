#include "hamlat/cartan.hpp"

namespace hamlat {

std::string to_string(NormalizerAction::Kind kind) {
  switch (kind) {
    case NormalizerAction::Kind::InFrameSpan:
      return "in_frame_span";
    case NormalizerAction::Kind::Normalizes:
      return "normalizes";
    case NormalizerAction::Kind::Moves:
      return "moves";
  }
  return "unknown";
}

mpz_class general_linear_order(std::size_t m, std::uint64_t q) {
  mpz_class qm;
  mpz_ui_pow_ui(qm.get_mpz_t(), q, m);
  mpz_class out = 1, qi = 1;
  for (std::size_t i = 0; i < m; ++i) {
    out *= qm - qi;
    qi *= q;
  }
  return out;
}

mpz_class cartan_count_formula(std::size_t m, std::uint64_t q) {
  mpz_class denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), q - 1, m);
  for (std::size_t i = 2; i <= m; ++i) denom *= static_cast<unsigned long>(i);
  return general_linear_order(m, q) / denom;
}

std::uint64_t matrix_space_size(std::size_t m, std::uint64_t q, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < m * m; ++k) {
    if (total > cap / q) {
      throw ResourceLimitError("M_" + std::to_string(m) + "(GF(" + std::to_string(q) + ")) has more than " +
                               std::to_string(cap) + " matrices");
    }
    total *= q;
  }
  return total;
}

Matrix<PrimeField> matrix_at(const PrimeField& field, std::size_t m, std::uint64_t index) {
  Matrix<PrimeField> x(field, m);
  const std::uint64_t q = field.order();
  // Last entry varies fastest.
  for (std::size_t k = m * m; k-- > 0;) {
    x(k / m, k % m) = field.element(index % q);
    index /= q;
  }
  return x;
}

namespace {

constexpr std::size_t kIdempotentCap = 200'000;

bool orthogonal(const Matrix<PrimeField>& a, const Matrix<PrimeField>& b) {
  return (a * b).is_zero() && (b * a).is_zero();
}

}  // namespace

std::vector<Matrix<PrimeField>> rank_one_idempotents(const PrimeField& field, std::size_t m) {
  // e = v w^T with w.v = 1; v normalised so its first nonzero entry is 1.
  const std::uint64_t q = field.order();
  std::uint64_t vectors = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (vectors > kIdempotentCap) throw ResourceLimitError("too many rank-1 idempotents to enumerate");
    vectors *= q;
  }
  // Count is (q^m - 1)/(q - 1) * q^(m-1).
  if ((vectors - 1) / (q - 1) * (vectors / q) > kIdempotentCap) {
    throw ResourceLimitError("too many rank-1 idempotents to enumerate");
  }
  auto vec_at = [&](std::uint64_t index) {
    std::vector<PrimeField::Element> v(m);
    for (std::size_t k = m; k-- > 0;) {
      v[k] = field.element(index % q);
      index /= q;
    }
    return v;
  };
  std::vector<Matrix<PrimeField>> out;
  for (std::uint64_t vi = 1; vi < vectors; ++vi) {
    const auto v = vec_at(vi);
    std::size_t lead = 0;
    while (field.is_zero(v[lead])) ++lead;
    if (!field.is_one(v[lead])) continue;
    for (std::uint64_t wi = 0; wi < vectors; ++wi) {
      const auto w = vec_at(wi);
      auto dot = field.zero();
      for (std::size_t k = 0; k < m; ++k) dot = field.add(dot, field.mul(v[k], w[k]));
      if (!field.is_one(dot)) continue;
      Matrix<PrimeField> e(field, m);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) e(i, j) = field.mul(v[i], w[j]);
      }
      out.push_back(std::move(e));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CartanFrame<PrimeField>> enumerate_cartan_frames(const PrimeField& field, std::size_t m,
                                                             std::size_t limit) {
  std::vector<CartanFrame<PrimeField>> out;
  if (limit == 0) return out;
  if (limit > kFrameEnumerationCap && cartan_count_formula(m, field.order()) > kFrameEnumerationCap) {
    throw ResourceLimitError("M_" + std::to_string(m) + "(GF(" + std::to_string(field.order()) + ")) has more than " +
                             std::to_string(kFrameEnumerationCap) + " Cartan subalgebras");
  }
  const auto idem = rank_one_idempotents(field, m);
  std::vector<std::size_t> pick;
  // Depth-first over increasing index tuples; m pairwise orthogonal rank-1
  // idempotents always sum to the identity.
  auto dfs = [&](auto&& self, std::size_t start) -> bool {
    if (pick.size() == m) {
      std::vector<Matrix<PrimeField>> frame;
      for (auto i : pick) frame.push_back(idem[i]);
      out.emplace_back(std::move(frame));
      return out.size() < limit;
    }
    for (std::size_t i = start; i < idem.size(); ++i) {
      bool fits = true;
      for (auto j : pick) {
        if (!orthogonal(idem[i], idem[j])) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      pick.push_back(i);
      const bool more = self(self, i + 1);
      pick.pop_back();
      if (!more) return false;
    }
    return true;
  };
  dfs(dfs, 0);
  return out;
}

CartanCount count_cartans(std::size_t m, const PrimeField& field) {
  CartanCount out;
  out.m = m;
  out.q = field.order();
  out.rank_one_idempotents = rank_one_idempotents(field, m).size();
  out.enumerated = enumerate_cartan_frames(field, m).size();
  out.formula = cartan_count_formula(m, field.order());
  return out;
}

std::vector<CartanFrame<RationalField>> unipotent_cartan_family(std::size_t m, std::size_t count) {
  const RationalField field;
  std::vector<CartanFrame<RationalField>> out;
  if (m == 1) {
    if (count > 0) out.push_back(CartanFrame<RationalField>::diagonal(field, 1));
    return out;
  }
  for (std::size_t t = 0; t < count; ++t) {
    auto g = Matrix<RationalField>::identity(field, m);
    g(0, 1) = field.from_int(static_cast<std::int64_t>(t));
    out.push_back(CartanFrame<RationalField>::conjugate_of_diagonal(g));
  }
  return out;
}

SteinitzNumber steinitz_of_algebra_chain(const std::vector<std::size_t>& sizes) {
  SteinitzNumber out;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] == 0) throw std::invalid_argument("algebra sizes must be positive");
    if (k > 0 && sizes[k] % sizes[k - 1] != 0) {
      throw std::invalid_argument(std::to_string(sizes[k - 1]) + " does not divide " + std::to_string(sizes[k]));
    }
    out = lcm(out, SteinitzNumber::from_natural(sizes[k]));
  }
  return out;
}

}  // namespace hamlat
