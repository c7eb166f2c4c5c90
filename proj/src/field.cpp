#include "hamlat/field.hpp"

#include <charconv>
#include <stdexcept>

#include "hamlat/steinitz.hpp"

namespace hamlat {

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (!is_prime(p)) throw std::invalid_argument("GF(" + std::to_string(p) + "): characteristic must be prime");
  if (p >= (1U << 31)) throw std::invalid_argument("GF(p) needs p < 2^31");
}

PrimeField::Element PrimeField::from_int(std::int64_t v) const {
  const std::int64_t r = v % static_cast<std::int64_t>(p_);
  return static_cast<Element>(r < 0 ? r + p_ : r);
}

PrimeField::Element PrimeField::inv(Element a) const {
  if (a % p_ == 0) throw std::domain_error("division by zero in " + name());
  // Fermat: a^(p-2).
  std::uint64_t result = 1, base = a, exp = p_ - 2;
  while (exp > 0) {
    if (exp & 1U) result = result * base % p_;
    base = base * base % p_;
    exp >>= 1U;
  }
  return static_cast<Element>(result);
}

PrimeField::Element PrimeField::random(std::mt19937_64& rng, std::int64_t) const {
  return static_cast<Element>(std::uniform_int_distribution<std::uint32_t>(0, p_ - 1)(rng));
}

RationalField::Element RationalField::from_int(std::int64_t v) const {
  mpq_class out;
  mpz_set_si(mpq_numref(out.get_mpq_t()), v);
  return out;
}

RationalField::Element RationalField::parse(std::string_view text) const {
  mpq_class out;
  if (text.empty() || out.set_str(std::string(text), 10) != 0) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  if (sgn(out.get_den()) == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  out.canonicalize();
  return out;
}

RationalField::Element RationalField::inv(const Element& a) const {
  if (sgn(a) == 0) throw std::domain_error("division by zero in q");
  return 1 / a;
}

RationalField::Element RationalField::random(std::mt19937_64& rng, std::int64_t bound) const {
  return from_int(std::uniform_int_distribution<std::int64_t>(-bound, bound)(rng));
}

AnyField parse_field(std::string_view name) {
  if (name == "q") return RationalField{};
  if (name.size() > 2 && name.substr(0, 2) == "gf") {
    std::uint32_t p = 0;
    const auto digits = name.substr(2);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) return PrimeField(p);
  }
  throw std::invalid_argument("unknown field '" + std::string(name) + "' (expected gf<p> or q)");
}

}  // namespace hamlat
