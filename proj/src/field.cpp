#include "permcount/field.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>
#include <utility>

#include "permcount/errors.hpp"

namespace permcount {

namespace {

using Poly = std::vector<std::uint32_t>;  // low-to-high over F_p

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo the monic polynomial m.
Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - lead) * m[i]) % p);
    }
    trim(a);
  }
  return a;
}

Poly decode(std::uint32_t code, std::uint32_t p, std::uint32_t r) {
  Poly out(r, 0);
  for (std::uint32_t i = 0; i < r; ++i) {
    out[i] = code % p;
    code /= p;
  }
  return out;
}

std::uint32_t encode(const Poly& a, std::uint32_t p) {
  std::uint32_t code = 0;
  for (std::size_t i = a.size(); i-- > 0;) code = code * p + a[i];
  return code;
}

// Polynomial-arithmetic multiplication, used only while the tables are built.
std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, const FieldSpec& spec) {
  const Poly pa = decode(a, spec.p, spec.r);
  const Poly pb = decode(b, spec.p, spec.r);
  Poly prod(2 * spec.r, 0);
  for (std::uint32_t i = 0; i < spec.r; ++i) {
    for (std::uint32_t j = 0; j < spec.r; ++j) {
      prod[i + j] = static_cast<std::uint32_t>(
          (prod[i + j] + static_cast<std::uint64_t>(pa[i]) * pb[j]) % spec.p);
    }
  }
  return encode(poly_mod(std::move(prod), spec.modulus, spec.p), spec.p);
}

std::uint32_t slow_pow(std::uint32_t a, std::uint64_t k, const FieldSpec& spec) {
  std::uint32_t result = 1;
  while (k > 0) {
    if (k & 1) result = slow_mul(result, a, spec);
    a = slow_mul(a, a, spec);
    k >>= 1;
  }
  return result;
}

std::uint64_t checked_power(std::uint64_t base, std::uint32_t exp, std::uint64_t cap) {
  std::uint64_t out = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (out > cap / base) return cap + 1;
    out *= base;
  }
  return out;
}

const std::map<std::pair<std::uint32_t, std::uint32_t>, Poly>& default_moduli() {
  // Low-to-high coefficients.
  static const std::map<std::pair<std::uint32_t, std::uint32_t>, Poly> table{
      {{2, 2}, {1, 1, 1}},                    // x^2+x+1
      {{2, 3}, {1, 1, 0, 1}},                 // x^3+x+1
      {{2, 4}, {1, 1, 0, 0, 1}},              // x^4+x+1
      {{2, 5}, {1, 0, 1, 0, 0, 1}},           // x^5+x^2+1
      {{2, 6}, {1, 1, 0, 0, 0, 0, 1}},        // x^6+x+1
      {{2, 7}, {1, 1, 0, 0, 0, 0, 0, 1}},     // x^7+x+1
      {{2, 8}, {1, 1, 0, 1, 1, 0, 0, 0, 1}},  // x^8+x^4+x^3+x+1
      {{2, 10}, {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1}},  // x^10+x^3+1
      {{3, 2}, {1, 0, 1}},                    // x^2+1
      {{3, 3}, {1, 2, 0, 1}},                 // x^3+2x+1
      {{3, 4}, {2, 1, 0, 0, 1}},              // x^4+x+2
      {{5, 2}, {1, 1, 1}},                    // x^2+x+1
      {{7, 2}, {1, 0, 1}},                    // x^2+1
      {{11, 2}, {1, 0, 1}},                   // x^2+1
      {{13, 2}, {2, 1, 1}},                   // x^2+x+2
      {{31, 2}, {1, 0, 1}},                   // x^2+1
  };
  return table;
}

std::uint32_t parse_uint(std::string_view s, std::string_view what) {
  std::uint32_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw InputError("invalid " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::uint32_t FieldSpec::q() const {
  std::uint32_t out = 1;
  for (std::uint32_t i = 0; i < r; ++i) out *= p;
  return out;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& modulus) {
  if (modulus.size() < 2 || modulus.back() != 1) return false;
  const std::uint32_t r = static_cast<std::uint32_t>(modulus.size() - 1);
  if (r == 1) return true;
  // Trial division by every monic divisor candidate of degree 1..r/2.
  for (std::uint32_t deg = 1; deg <= r / 2; ++deg) {
    const std::uint64_t count = checked_power(p, deg, UINT32_MAX);
    for (std::uint64_t low = 0; low < count; ++low) {
      Poly divisor = decode(static_cast<std::uint32_t>(low), p, deg);
      divisor.push_back(1);
      if (poly_mod(modulus, divisor, p).empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> default_modulus(std::uint32_t p, std::uint32_t r) {
  if (r == 1) return {0, 1};
  if (auto it = default_moduli().find({p, r}); it != default_moduli().end()) return it->second;
  // Lexicographically least monic irreducible polynomial.
  const std::uint64_t count = checked_power(p, r, UINT32_MAX);
  for (std::uint64_t low = 0; low < count; ++low) {
    Poly candidate = decode(static_cast<std::uint32_t>(low), p, r);
    candidate.push_back(1);
    if (is_irreducible(p, candidate)) return candidate;
  }
  throw FieldConstructionError("no irreducible polynomial found");  // unreachable for prime p
}

FieldCtx build_field(std::uint32_t p, std::uint32_t r,
                     const std::optional<std::vector<std::uint32_t>>& modulus,
                     std::uint32_t guard) {
  if (!is_prime(p)) throw CompositeCharacteristic(p);
  if (r < 1) throw FieldConstructionError("extension degree must be at least 1");
  const std::uint64_t q = checked_power(p, r, guard);
  if (q > guard) throw FieldTooLarge(guard, q);

  FieldCtx ctx;
  ctx.spec_.p = p;
  ctx.spec_.r = r;
  ctx.spec_.modulus = (modulus && !modulus->empty()) ? *modulus : default_modulus(p, r);
  const Poly& mod = ctx.spec_.modulus;
  if (mod.size() != r + 1) {
    throw FieldConstructionError("modulus must have degree " + std::to_string(r));
  }
  if (std::any_of(mod.begin(), mod.end(), [p](std::uint32_t c) { return c >= p; })) {
    throw FieldConstructionError("modulus coefficients must lie in [0, p)");
  }
  if (mod.back() != 1) throw FieldConstructionError("modulus must be monic");
  if (!is_irreducible(p, mod)) {
    throw ReducibleModulus("modulus " + to_string(ctx.spec_) + " is reducible over F_" +
                           std::to_string(p));
  }
  ctx.q_ = static_cast<std::uint32_t>(q);
  const std::uint32_t order = ctx.q_ - 1;

  // Least primitive element.
  const auto factors = prime_factors(order);
  std::uint32_t omega = 0;
  for (std::uint32_t g = 1; g < ctx.q_ && omega == 0; ++g) {
    if (slow_pow(g, order, ctx.spec_) != 1) continue;
    const bool primitive = std::all_of(factors.begin(), factors.end(), [&](std::uint64_t l) {
      return slow_pow(g, order / l, ctx.spec_) != 1;
    });
    if (primitive) omega = g;
  }
  if (omega == 0) throw ReducibleModulus("no primitive element: modulus is not irreducible");
  ctx.omega_ = FieldElem{omega};

  ctx.exp_table_.resize(order);
  ctx.log_table_.assign(ctx.q_, 0);
  std::vector<bool> seen(ctx.q_, false);
  std::uint32_t cur = 1;
  for (std::uint32_t i = 0; i < order; ++i) {
    if (cur == 0 || seen[cur]) throw std::logic_error("exp table is not a bijection");
    seen[cur] = true;
    ctx.exp_table_[i] = FieldElem{cur};
    ctx.log_table_[cur] = i;
    cur = slow_mul(cur, omega, ctx.spec_);
  }

  ctx.neg_table_.resize(ctx.q_);
  for (std::uint32_t a = 0; a < ctx.q_; ++a) {
    ctx.neg_table_[a] = static_cast<std::uint32_t>(detail::digitwise_neg(a, p, r));
  }
  if (ctx.q_ <= 256) {
    ctx.add_table_.resize(static_cast<std::size_t>(ctx.q_) * ctx.q_);
    for (std::uint32_t a = 0; a < ctx.q_; ++a) {
      for (std::uint32_t b = 0; b < ctx.q_; ++b) {
        ctx.add_table_[a * ctx.q_ + b] =
            static_cast<std::uint16_t>(detail::digitwise_add(a, b, p, r));
      }
    }
  }

  // Tr(a) = a + a^p + ... + a^{p^{r-1}}; must land in the prime subfield.
  ctx.trace_table_.resize(ctx.q_);
  for (std::uint32_t a = 0; a < ctx.q_; ++a) {
    FieldElem sum{0};
    FieldElem frob{a};
    for (std::uint32_t i = 0; i < r; ++i) {
      sum = ctx.add(sum, frob);
      frob = ctx.pow(frob, p);
    }
    if (sum.code >= p) throw std::logic_error("trace left the prime subfield");
    ctx.trace_table_[a] = sum.code;
  }
  return ctx;
}

FieldElem FieldCtx::add(FieldElem a, FieldElem b) const {
  if (!add_table_.empty()) return FieldElem{add_table_[a.code * q_ + b.code]};
  return FieldElem{static_cast<std::uint32_t>(detail::digitwise_add(a.code, b.code, spec_.p,
                                                                    spec_.r))};
}

FieldElem FieldCtx::neg(FieldElem a) const { return FieldElem{neg_table_[a.code]}; }

FieldElem FieldCtx::mul(FieldElem a, FieldElem b) const {
  if (a.code == 0 || b.code == 0) return zero();
  const std::uint32_t order = q_ - 1;
  std::uint32_t e = log_table_[a.code] + log_table_[b.code];
  if (e >= order) e -= order;
  return exp_table_[e];
}

FieldElem FieldCtx::inv(FieldElem a) const {
  if (a.code == 0) throw DomainError("inverse of zero");
  const std::uint32_t order = q_ - 1;
  const std::uint32_t e = log_table_[a.code];
  return exp_table_[e == 0 ? 0 : order - e];
}

FieldElem FieldCtx::pow(FieldElem a, std::int64_t k) const {
  if (k == 0) return one();
  if (a.code == 0) {
    if (k < 0) throw DomainError("negative power of zero");
    return zero();
  }
  const std::int64_t order = q_ - 1;
  std::int64_t e = (static_cast<std::int64_t>(log_table_[a.code]) * (k % order)) % order;
  if (e < 0) e += order;
  return exp_table_[static_cast<std::size_t>(e)];
}

FieldElem FieldCtx::omega_pow(std::int64_t i) const {
  const std::int64_t order = q_ - 1;
  std::int64_t e = i % order;
  if (e < 0) e += order;
  return exp_table_[static_cast<std::size_t>(e)];
}

std::uint32_t FieldCtx::log(FieldElem a) const {
  if (a.code == 0) throw DomainError("discrete log of zero");
  return log_table_[a.code];
}

std::vector<std::uint32_t> parse_modulus(std::string_view text) {
  std::vector<std::uint32_t> high_to_low;
  while (true) {
    const auto comma = text.find(',');
    high_to_low.push_back(parse_uint(text.substr(0, comma), "modulus coefficient"));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return {high_to_low.rbegin(), high_to_low.rend()};
}

FieldSpec parse_field_spec(std::string_view text) {
  FieldSpec spec;
  std::string_view head = text;
  std::string_view coeffs;
  if (const auto colon = text.find(':'); colon != std::string_view::npos) {
    head = text.substr(0, colon);
    coeffs = text.substr(colon + 1);
    if (coeffs.empty()) throw InputError("empty modulus in field spec '" + std::string(text) + "'");
  }
  if (const auto caret = head.find('^'); caret != std::string_view::npos) {
    spec.p = parse_uint(head.substr(0, caret), "field characteristic");
    spec.r = parse_uint(head.substr(caret + 1), "extension degree");
  } else {
    spec.p = parse_uint(head, "field characteristic");
    spec.r = 1;
  }
  if (!coeffs.empty()) {
    spec.modulus = parse_modulus(coeffs);
    if (head.find('^') == std::string_view::npos && spec.modulus.size() >= 2) {
      spec.r = static_cast<std::uint32_t>(spec.modulus.size() - 1);
    }
  }
  return spec;
}

std::string to_string(const FieldSpec& spec) {
  std::string out = std::to_string(spec.p) + "^" + std::to_string(spec.r);
  if (!spec.modulus.empty()) {
    out += ':';
    for (std::size_t i = spec.modulus.size(); i-- > 0;) {
      out += std::to_string(spec.modulus[i]);
      if (i != 0) out += ',';
    }
  }
  return out;
}

}  // namespace permcount
