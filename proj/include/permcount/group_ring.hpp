#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "permcount/bigint.hpp"
#include "permcount/field.hpp"

namespace permcount {

/// Index set F_q^m of a group-ring element. A key packs an m-tuple of field
/// codes as sum_l code_l * q^l, so it is a base-p number with m*r digits and
/// adding tuples is digitwise addition mod p.
struct KeySpace {
  std::uint32_t p = 0;
  std::uint32_t r = 0;
  std::uint32_t m = 0;  // 0 marks an unbound (default-constructed) zero

  std::uint32_t q() const;
  std::uint32_t digits() const { return r * m; }
  /// q^m; throws GuardError("key_space") if it does not fit in 63 bits.
  std::uint64_t size() const;
  bool bound() const { return m != 0; }

  bool operator==(const KeySpace&) const = default;
};

using Key = std::uint64_t;

KeySpace key_space(const FieldCtx& ctx, std::uint32_t m);
Key encode_key(const FieldCtx& ctx, std::span<const FieldElem> alpha);
std::vector<FieldElem> decode_key(const KeySpace& ks, Key key);

/// Element of Z[F_q^m]: finitely supported integer function on F_q^m with
/// convolution product. Terms are kept sorted by key with no zero coefficient.
class GroupRingElem {
 public:
  using Term = std::pair<Key, BigInt>;

  GroupRingElem() = default;
  explicit GroupRingElem(KeySpace ks) : ks_(ks) {}
  /// Sorts, merges duplicate keys and drops zeros.
  GroupRingElem(KeySpace ks, std::vector<Term> terms);

  static GroupRingElem zero(KeySpace ks) { return GroupRingElem(ks); }
  static GroupRingElem one(KeySpace ks);

  const KeySpace& space() const noexcept { return ks_; }
  std::uint32_t arity() const noexcept { return ks_.m; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  BigInt coefficient(Key key) const;
  BigInt constant_term() const { return coefficient(0); }
  /// Sum of all coefficients (the image under X^a -> 1).
  BigInt total_mass() const;

  GroupRingElem& operator+=(const GroupRingElem& other);
  GroupRingElem& operator-=(const GroupRingElem& other);
  GroupRingElem& operator*=(const GroupRingElem& other) { return *this = *this * other; }

  friend GroupRingElem operator+(GroupRingElem a, const GroupRingElem& b) { return a += b; }
  friend GroupRingElem operator-(GroupRingElem a, const GroupRingElem& b) { return a -= b; }
  friend GroupRingElem operator-(GroupRingElem a);
  friend GroupRingElem operator*(const GroupRingElem& a, const GroupRingElem& b);
  friend GroupRingElem operator*(GroupRingElem a, const BigInt& n);

  bool operator==(const GroupRingElem& other) const;

  /// Adds a single signed monomial in place; the Ryser inner update.
  void add_monomial(Key key, int sign);

 private:
  friend BigInt constant_term_of_product(const GroupRingElem&, const GroupRingElem&);

  KeySpace ks_;
  std::vector<Term> terms_;
};

GroupRingElem monomial(const FieldCtx& ctx, std::span<const FieldElem> alpha);
inline GroupRingElem monomial(const FieldCtx& ctx, FieldElem alpha) {
  return monomial(ctx, std::span<const FieldElem>(&alpha, 1));
}

inline GroupRingElem gr_add(const GroupRingElem& a, const GroupRingElem& b) { return a + b; }
inline GroupRingElem gr_neg(const GroupRingElem& a) { return -a; }
inline GroupRingElem gr_scale(const GroupRingElem& a, const BigInt& n) { return a * n; }
inline GroupRingElem gr_mul(const GroupRingElem& a, const GroupRingElem& b) { return a * b; }

BigInt coefficient(const FieldCtx& ctx, const GroupRingElem& a, std::span<const FieldElem> alpha);
inline BigInt constant_term(const GroupRingElem& a) { return a.constant_term(); }

/// Constant term of a*b, i.e. sum over keys k of a(k) * b(-k), without forming the product.
BigInt constant_term_of_product(const GroupRingElem& a, const GroupRingElem& b);

/// Element of Z[x]/(x^p - 1); x stands for a primitive p-th root of unity.
class CycloElem {
 public:
  CycloElem() = default;
  explicit CycloElem(std::uint32_t p) : coeffs_(p) {}
  CycloElem(std::uint32_t p, std::vector<BigInt> coeffs);

  static CycloElem zero(std::uint32_t p) { return CycloElem(p); }
  static CycloElem one(std::uint32_t p);
  /// x^k, k reduced mod p.
  static CycloElem root_power(std::uint32_t p, std::int64_t k);

  std::uint32_t p() const noexcept { return static_cast<std::uint32_t>(coeffs_.size()); }
  const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }
  const BigInt& operator[](std::size_t k) const { return coeffs_[k]; }

  CycloElem& operator+=(const CycloElem& other);
  CycloElem& operator-=(const CycloElem& other);
  CycloElem& operator*=(const CycloElem& other) { return *this = *this * other; }

  friend CycloElem operator+(CycloElem a, const CycloElem& b) { return a += b; }
  friend CycloElem operator-(CycloElem a, const CycloElem& b) { return a -= b; }
  friend CycloElem operator-(CycloElem a);
  friend CycloElem operator*(const CycloElem& a, const CycloElem& b);

  bool operator==(const CycloElem& other) const = default;

 private:
  std::vector<BigInt> coeffs_;  // empty only for the default (unbound) zero
};

inline CycloElem cyclo_add(const CycloElem& a, const CycloElem& b) { return a + b; }
inline CycloElem cyclo_mul(const CycloElem& a, const CycloElem& b) { return a * b; }
inline CycloElem cyclo_neg(const CycloElem& a) { return -a; }

/// The rational integer an element equals once 1 + x + ... + x^{p-1} = 0 is
/// imposed. Throws IdentityFailure if the tail coefficients are not all equal.
BigInt cyclo_as_integer(const CycloElem& a);

/// Ring homomorphism Z[F_q] -> Z[x]/(x^p - 1), X^a -> x^{Tr(a)}.
CycloElem eval_trace_character(const FieldCtx& ctx, const GroupRingElem& a);

/// "3 + 1·X^{w^1} + ..." rendering; constant first.
std::string to_string(const FieldCtx& ctx, const GroupRingElem& a);
std::string to_string(const CycloElem& a);

/// {"constant": n, "terms": [{"exp": [codes], "coef": n}]}, terms in key order.
nlohmann::ordered_json to_json(const GroupRingElem& a);
nlohmann::ordered_json bigint_to_json(const BigInt& v);

}  // namespace permcount

namespace Eigen {

template <>
struct NumTraits<permcount::GroupRingElem> : GenericNumTraits<int> {
  using Real = permcount::GroupRingElem;
  using NonInteger = permcount::GroupRingElem;
  using Literal = permcount::GroupRingElem;
  using Nested = permcount::GroupRingElem;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = HugeCost,
    AddCost = HugeCost,
    MulCost = HugeCost
  };
};

template <>
struct NumTraits<permcount::CycloElem> : GenericNumTraits<int> {
  using Real = permcount::CycloElem;
  using NonInteger = permcount::CycloElem;
  using Literal = permcount::CycloElem;
  using Nested = permcount::CycloElem;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = HugeCost,
    AddCost = HugeCost,
    MulCost = HugeCost
  };
};

}  // namespace Eigen
