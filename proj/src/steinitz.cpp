#include "hamlat/steinitz.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hamlat {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

// Brent's variant of Pollard rho; n must be composite and odd.
u64 pollard_brent(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    const u64 block = 128;
    u64 r = 1;
    auto step = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = step(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(block, r - k); ++i) {
          y = step(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += block;
      } while (k < r && g == 1);
      r <<= 1U;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void collect_factors(u64 n, std::map<u64, u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % p == 0) {
      ++out[p];
      collect_factors(n / p, out);
      return;
    }
  }
  const u64 d = pollard_brent(n);
  collect_factors(d, out);
  collect_factors(n / d, out);
}

u64 parse_u64(std::string_view token, std::string_view what) {
  if (token.empty()) throw std::invalid_argument("empty " + std::string(what));
  u64 value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("malformed " + std::string(what) + ": '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("cannot factorize 0");
  std::map<u64, u64> acc;
  collect_factors(n, acc);
  return {acc.begin(), acc.end()};
}

std::uint64_t Exponent::value() const {
  if (infinite_) throw std::domain_error("infinite exponent has no finite value");
  return value_;
}

Exponent operator+(Exponent a, Exponent b) {
  if (a.infinite_ || b.infinite_) return Exponent::infinity();
  if (a.value_ > std::numeric_limits<u64>::max() - b.value_) {
    throw std::overflow_error("Steinitz exponent overflow");
  }
  return Exponent::finite(a.value_ + b.value_);
}

SteinitzNumber::SteinitzNumber(const FactorMap& factors) {
  for (const auto& [p, e] : factors) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (!e.is_zero()) factors_.emplace(p, e);
  }
}

SteinitzNumber SteinitzNumber::from_natural(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("0 is not a Steinitz number");
  SteinitzNumber out;
  for (const auto& [p, k] : factorize(n)) out.factors_.emplace(p, Exponent::finite(k));
  return out;
}

SteinitzNumber SteinitzNumber::parse(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\n");
  const auto last = text.find_last_not_of(" \t\n");
  if (first == std::string_view::npos) throw std::invalid_argument("empty Steinitz number");
  text = text.substr(first, last - first + 1);
  if (text == "1") return {};

  FactorMap factors;
  std::size_t pos = 0;
  while (true) {
    const auto star = text.find('*', pos);
    const auto term = text.substr(pos, star == std::string_view::npos ? std::string_view::npos : star - pos);
    const auto caret = term.find('^');
    const u64 prime = parse_u64(term.substr(0, caret), "prime");
    if (!is_prime(prime)) throw std::invalid_argument(std::to_string(prime) + " is not prime");
    Exponent e = Exponent::finite(1);
    if (caret != std::string_view::npos) {
      const auto exp_text = term.substr(caret + 1);
      if (exp_text == "inf") {
        e = Exponent::infinity();
      } else {
        const u64 k = parse_u64(exp_text, "exponent");
        if (k == 0) throw std::invalid_argument("zero exponent on prime " + std::to_string(prime));
        e = Exponent::finite(k);
      }
    }
    if (!factors.emplace(prime, e).second) {
      throw std::invalid_argument("prime " + std::to_string(prime) + " repeated");
    }
    if (star == std::string_view::npos) break;
    pos = star + 1;
  }
  return SteinitzNumber(factors);
}

Exponent SteinitzNumber::exponent(std::uint64_t prime) const {
  const auto it = factors_.find(prime);
  return it == factors_.end() ? Exponent::finite(0) : it->second;
}

bool SteinitzNumber::is_finite() const {
  return std::none_of(factors_.begin(), factors_.end(), [](const auto& kv) { return kv.second.is_infinite(); });
}

mpz_class SteinitzNumber::to_natural() const {
  if (!is_finite()) throw std::domain_error("infinite Steinitz number " + to_string());
  mpz_class out = 1;
  for (const auto& [p, e] : factors_) {
    mpz_class power;
    mpz_class base(std::to_string(p));
    if (e.value() > std::numeric_limits<unsigned long>::max()) throw std::overflow_error("exponent too large");
    mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e.value()));
    out *= power;
  }
  return out;
}

std::string SteinitzNumber::to_string() const {
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& [p, e] : factors_) {
    if (!out.empty()) out += '*';
    out += std::to_string(p);
    if (e.is_infinite()) {
      out += "^inf";
    } else if (e.value() != 1) {
      out += '^' + std::to_string(e.value());
    }
  }
  return out;
}

SteinitzNumber operator*(const SteinitzNumber& a, const SteinitzNumber& b) {
  SteinitzNumber out = a;
  for (const auto& [p, e] : b.factors_) {
    auto [it, inserted] = out.factors_.emplace(p, e);
    if (!inserted) it->second = it->second + e;
  }
  return out;
}

SteinitzNumber mul(const SteinitzNumber& a, const SteinitzNumber& b) { return a * b; }

SteinitzNumber lcm(const SteinitzNumber& a, const SteinitzNumber& b) {
  SteinitzNumber::FactorMap out = a.factors();
  for (const auto& [p, e] : b.factors()) {
    auto [it, inserted] = out.emplace(p, e);
    if (!inserted) it->second = std::max(it->second, e);
  }
  return SteinitzNumber(out);
}

bool divides(const SteinitzNumber& a, const SteinitzNumber& b) {
  return std::all_of(a.factors().begin(), a.factors().end(),
                     [&](const auto& kv) { return kv.second <= b.exponent(kv.first); });
}

}  // namespace hamlat
