#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace permcount {

inline constexpr std::uint32_t kDefaultFieldGuard = 1u << 16;

/// F_{p^r} given by an irreducible monic modulus over F_p.
///
/// `modulus` is stored low-to-high: modulus[i] is the coefficient of x^i and
/// modulus[r] == 1.
struct FieldSpec {
  std::uint32_t p = 2;
  std::uint32_t r = 1;
  std::vector<std::uint32_t> modulus;

  std::uint32_t q() const;
  bool operator==(const FieldSpec&) const = default;
};

/// Element of F_q encoded as its coefficient vector read as a base-p integer.
/// Code 0 is zero and code 1 is one.
struct FieldElem {
  std::uint32_t code = 0;

  auto operator<=>(const FieldElem&) const = default;
};

/// A fully tabulated finite field. Immutable after construction.
class FieldCtx {
 public:
  const FieldSpec& spec() const noexcept { return spec_; }
  std::uint32_t p() const noexcept { return spec_.p; }
  std::uint32_t r() const noexcept { return spec_.r; }
  std::uint32_t q() const noexcept { return q_; }

  /// Least code of multiplicative order q-1.
  FieldElem omega() const noexcept { return omega_; }
  FieldElem zero() const noexcept { return FieldElem{0}; }
  FieldElem one() const noexcept { return FieldElem{1}; }
  bool contains(FieldElem a) const noexcept { return a.code < q_; }

  FieldElem add(FieldElem a, FieldElem b) const;
  FieldElem sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }
  FieldElem neg(FieldElem a) const;
  FieldElem mul(FieldElem a, FieldElem b) const;
  /// Throws DomainError for a == 0.
  FieldElem inv(FieldElem a) const;
  /// Negative exponents go through the inverse; 0^0 == 1.
  FieldElem pow(FieldElem a, std::int64_t k) const;

  /// omega^i for any integer i.
  FieldElem omega_pow(std::int64_t i) const;
  /// Discrete log base omega, in [0, q-1). Throws DomainError for zero.
  std::uint32_t log(FieldElem a) const;

  /// Absolute trace onto F_p, as an integer in [0, p).
  std::uint32_t trace(FieldElem a) const { return trace_table_[a.code]; }

  const std::vector<FieldElem>& exp_table() const noexcept { return exp_table_; }
  const std::vector<std::uint32_t>& log_table() const noexcept { return log_table_; }
  const std::vector<std::uint32_t>& trace_table() const noexcept { return trace_table_; }

 private:
  friend FieldCtx build_field(std::uint32_t, std::uint32_t,
                              const std::optional<std::vector<std::uint32_t>>&, std::uint32_t);
  FieldCtx() = default;

  FieldSpec spec_;
  std::uint32_t q_ = 0;
  FieldElem omega_;
  std::vector<FieldElem> exp_table_;
  std::vector<std::uint32_t> log_table_;  // log_table_[0] is unused
  std::vector<std::uint32_t> trace_table_;
  std::vector<std::uint16_t> add_table_;  // q*q entries, only for q <= 256
  std::vector<std::uint32_t> neg_table_;
};

/// Builds F_{p^r}. Without a modulus a built-in default irreducible polynomial
/// is used. The modulus, when given, is low-to-high and must be monic.
///
/// Throws CompositeCharacteristic, ReducibleModulus, FieldTooLarge or
/// FieldConstructionError (malformed modulus).
FieldCtx build_field(std::uint32_t p, std::uint32_t r,
                     const std::optional<std::vector<std::uint32_t>>& modulus = std::nullopt,
                     std::uint32_t guard = kDefaultFieldGuard);

inline FieldCtx build_field(const FieldSpec& spec, std::uint32_t guard = kDefaultFieldGuard) {
  return build_field(spec.p, spec.r, spec.modulus, guard);
}

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// Low-to-high monic modulus of degree r; true iff it has no factor of degree 1..r/2.
bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& modulus);

/// Default modulus for F_{p^r} (low-to-high).
std::vector<std::uint32_t> default_modulus(std::uint32_t p, std::uint32_t r);

/// Parses "p", "p^r" or "p^r:c_r,...,c_0" (coefficients high-to-low).
/// The modulus is left empty when not given. Throws InputError.
FieldSpec parse_field_spec(std::string_view text);

/// Parses a comma-separated high-to-low coefficient list into a low-to-high modulus.
std::vector<std::uint32_t> parse_modulus(std::string_view text);

/// "p^r" plus ":c_r,...,c_0" when a modulus is set.
std::string to_string(const FieldSpec& spec);

namespace detail {

/// Adds two base-p numbers digit by digit without carry, over `digits` digits.
inline std::uint64_t digitwise_add(std::uint64_t a, std::uint64_t b, std::uint32_t p,
                                   std::uint32_t digits) {
  if (p == 2) return a ^ b;
  std::uint64_t out = 0;
  std::uint64_t place = 1;
  for (std::uint32_t i = 0; i < digits && (a | b) != 0; ++i) {
    const std::uint64_t s = a % p + b % p;
    out += (s >= p ? s - p : s) * place;
    a /= p;
    b /= p;
    place *= p;
  }
  return out;
}

inline std::uint64_t digitwise_neg(std::uint64_t a, std::uint32_t p, std::uint32_t digits) {
  if (p == 2) return a;
  std::uint64_t out = 0;
  std::uint64_t place = 1;
  for (std::uint32_t i = 0; i < digits && a != 0; ++i) {
    const std::uint64_t d = a % p;
    out += (d == 0 ? 0 : p - d) * place;
    a /= p;
    place *= p;
  }
  return out;
}

}  // namespace detail

}  // namespace permcount
