#include "permcount/group_ring.hpp"

#include <algorithm>
#include <sstream>

#include "permcount/errors.hpp"

namespace permcount {

namespace {

bool key_less(const GroupRingElem::Term& t, Key k) { return t.first < k; }

// Resolves the common key space of two operands; an unbound zero adopts the other's.
KeySpace common_space(const KeySpace& a, const KeySpace& b) {
  if (!a.bound()) return b;
  if (!b.bound()) return a;
  if (a != b) {
    throw ArityMismatch("group-ring operands differ: arity " + std::to_string(a.m) + " over F_" +
                        std::to_string(a.q()) + " vs arity " + std::to_string(b.m) + " over F_" +
                        std::to_string(b.q()));
  }
  return a;
}

std::uint32_t common_p(const CycloElem& a, const CycloElem& b) {
  if (a.coeffs().empty()) return b.p();
  if (b.coeffs().empty()) return a.p();
  if (a.p() != b.p()) {
    throw ArityMismatch("cyclotomic operands differ: p=" + std::to_string(a.p()) +
                        " vs p=" + std::to_string(b.p()));
  }
  return a.p();
}

}  // namespace

std::uint32_t KeySpace::q() const {
  std::uint32_t out = 1;
  for (std::uint32_t i = 0; i < r; ++i) out *= p;
  return out;
}

std::uint64_t KeySpace::size() const {
  const std::uint64_t base = q();
  std::uint64_t out = 1;
  for (std::uint32_t i = 0; i < m; ++i) {
    if (out > (std::uint64_t{1} << 62) / base) {
      throw GuardError("key_space", std::uint64_t{1} << 62, UINT64_MAX);
    }
    out *= base;
  }
  return out;
}

KeySpace key_space(const FieldCtx& ctx, std::uint32_t m) {
  KeySpace ks{ctx.p(), ctx.r(), m};
  (void)ks.size();
  return ks;
}

Key encode_key(const FieldCtx& ctx, std::span<const FieldElem> alpha) {
  Key key = 0;
  for (std::size_t l = alpha.size(); l-- > 0;) {
    if (!ctx.contains(alpha[l])) throw InputError("field element outside F_q");
    key = key * ctx.q() + alpha[l].code;
  }
  return key;
}

std::vector<FieldElem> decode_key(const KeySpace& ks, Key key) {
  std::vector<FieldElem> out(ks.m);
  const std::uint32_t q = ks.q();
  for (std::uint32_t l = 0; l < ks.m; ++l) {
    out[l] = FieldElem{static_cast<std::uint32_t>(key % q)};
    key /= q;
  }
  return out;
}

GroupRingElem::GroupRingElem(KeySpace ks, std::vector<Term> terms) : ks_(ks) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  for (auto& t : terms) {
    if (!terms_.empty() && terms_.back().first == t.first) {
      terms_.back().second += t.second;
    } else {
      if (!terms_.empty() && terms_.back().second == 0) terms_.pop_back();
      terms_.push_back(std::move(t));
    }
  }
  if (!terms_.empty() && terms_.back().second == 0) terms_.pop_back();
}

GroupRingElem GroupRingElem::one(KeySpace ks) {
  GroupRingElem out(ks);
  out.terms_.emplace_back(0, BigInt(1));
  return out;
}

BigInt GroupRingElem::coefficient(Key key) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key, key_less);
  if (it != terms_.end() && it->first == key) return it->second;
  return BigInt(0);
}

BigInt GroupRingElem::total_mass() const {
  BigInt sum = 0;
  for (const auto& t : terms_) sum += t.second;
  return sum;
}

GroupRingElem& GroupRingElem::operator+=(const GroupRingElem& other) {
  ks_ = common_space(ks_, other.ks_);
  if (other.terms_.empty()) return *this;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      BigInt sum = a->second + b->second;
      if (sum != 0) merged.emplace_back(a->first, std::move(sum));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

GroupRingElem& GroupRingElem::operator-=(const GroupRingElem& other) { return *this += -other; }

GroupRingElem operator-(GroupRingElem a) {
  for (auto& t : a.terms_) t.second = -t.second;
  return a;
}

GroupRingElem operator*(GroupRingElem a, const BigInt& n) {
  if (n == 0) {
    a.terms_.clear();
    return a;
  }
  for (auto& t : a.terms_) t.second *= n;
  return a;
}

GroupRingElem operator*(const GroupRingElem& a, const GroupRingElem& b) {
  const KeySpace ks = common_space(a.ks_, b.ks_);
  GroupRingElem out(ks);
  if (a.terms_.empty() || b.terms_.empty()) return out;
  const std::uint32_t p = ks.p;
  const std::uint32_t digits = ks.digits();
  const std::uint64_t pairs = static_cast<std::uint64_t>(a.terms_.size()) * b.terms_.size();
  const std::uint64_t size = ks.size();

  if (size <= std::max<std::uint64_t>(4096, 2 * pairs) && size <= (std::uint64_t{1} << 22)) {
    std::vector<BigInt> dense(size);
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        dense[detail::digitwise_add(ka, kb, p, digits)] += ca * cb;
      }
    }
    for (std::uint64_t k = 0; k < size; ++k) {
      if (dense[k] != 0) out.terms_.emplace_back(k, std::move(dense[k]));
    }
    return out;
  }

  std::vector<GroupRingElem::Term> products;
  products.reserve(pairs);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      products.emplace_back(detail::digitwise_add(ka, kb, p, digits), ca * cb);
    }
  }
  return GroupRingElem(ks, std::move(products));
}

bool GroupRingElem::operator==(const GroupRingElem& other) const {
  if (terms_.empty() || other.terms_.empty()) return terms_.empty() && other.terms_.empty();
  return ks_ == other.ks_ && terms_ == other.terms_;
}

void GroupRingElem::add_monomial(Key key, int sign) {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key, key_less);
  if (it != terms_.end() && it->first == key) {
    it->second += sign;
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.emplace(it, key, BigInt(sign));
  }
}

GroupRingElem monomial(const FieldCtx& ctx, std::span<const FieldElem> alpha) {
  if (alpha.empty()) throw ArityMismatch("monomial needs arity >= 1");
  const KeySpace ks = key_space(ctx, static_cast<std::uint32_t>(alpha.size()));
  return GroupRingElem(ks, {{encode_key(ctx, alpha), BigInt(1)}});
}

BigInt coefficient(const FieldCtx& ctx, const GroupRingElem& a, std::span<const FieldElem> alpha) {
  if (a.space().bound() && alpha.size() != a.arity()) {
    throw ArityMismatch("coefficient lookup with wrong tuple length");
  }
  return a.coefficient(encode_key(ctx, alpha));
}

BigInt constant_term_of_product(const GroupRingElem& a, const GroupRingElem& b) {
  const KeySpace ks = common_space(a.ks_, b.ks_);
  BigInt sum = 0;
  const auto& small = a.terms_.size() <= b.terms_.size() ? a.terms_ : b.terms_;
  const auto& large = a.terms_.size() <= b.terms_.size() ? b.terms_ : a.terms_;
  for (const auto& [k, c] : small) {
    const Key target = detail::digitwise_neg(k, ks.p, ks.digits());
    auto it = std::lower_bound(large.begin(), large.end(), target, key_less);
    if (it != large.end() && it->first == target) sum += c * it->second;
  }
  return sum;
}

CycloElem::CycloElem(std::uint32_t p, std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != p) throw ArityMismatch("cyclotomic element needs exactly p coefficients");
}

CycloElem CycloElem::one(std::uint32_t p) {
  CycloElem out(p);
  out.coeffs_[0] = 1;
  return out;
}

CycloElem CycloElem::root_power(std::uint32_t p, std::int64_t k) {
  CycloElem out(p);
  std::int64_t e = k % static_cast<std::int64_t>(p);
  if (e < 0) e += p;
  out.coeffs_[static_cast<std::size_t>(e)] = 1;
  return out;
}

CycloElem& CycloElem::operator+=(const CycloElem& other) {
  const std::uint32_t p = common_p(*this, other);
  if (other.coeffs_.empty()) return *this;
  if (coeffs_.empty()) coeffs_.assign(p, BigInt(0));
  for (std::uint32_t k = 0; k < p; ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

CycloElem& CycloElem::operator-=(const CycloElem& other) { return *this += -other; }

CycloElem operator-(CycloElem a) {
  for (auto& c : a.coeffs_) c = -c;
  return a;
}

CycloElem operator*(const CycloElem& a, const CycloElem& b) {
  const std::uint32_t p = common_p(a, b);
  CycloElem out(p);
  if (a.coeffs_.empty() || b.coeffs_.empty()) return out;
  for (std::uint32_t i = 0; i < p; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::uint32_t j = 0; j < p; ++j) {
      const std::uint32_t k = i + j >= p ? i + j - p : i + j;
      out.coeffs_[k] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return out;
}

BigInt cyclo_as_integer(const CycloElem& a) {
  if (a.coeffs().empty()) return BigInt(0);
  const auto& c = a.coeffs();
  if (c.size() == 1) return c[0];
  for (std::size_t k = 2; k < c.size(); ++k) {
    if (c[k] != c[1]) {
      throw IdentityFailure("cyclo_as_integer",
                            "element " + to_string(a) + " is not a rational integer");
    }
  }
  return c[0] - c[1];
}

CycloElem eval_trace_character(const FieldCtx& ctx, const GroupRingElem& a) {
  if (a.space().bound() && a.arity() != 1) {
    throw ArityMismatch("trace character evaluation needs arity 1");
  }
  std::vector<BigInt> coeffs(ctx.p());
  for (const auto& [key, c] : a.terms()) {
    coeffs[ctx.trace(FieldElem{static_cast<std::uint32_t>(key)})] += c;
  }
  return CycloElem(ctx.p(), std::move(coeffs));
}

std::string to_string(const FieldCtx& ctx, const GroupRingElem& a) {
  if (a.is_zero()) return "0";
  const std::uint32_t order = ctx.q() - 1;
  auto render_code = [&](std::uint32_t code) -> std::string {
    if (code == 0) return "0";
    const std::uint32_t i = ctx.log(FieldElem{code});
    return "w^" + std::to_string(i == 0 ? order : i);
  };

  BigInt constant = 0;
  std::vector<const GroupRingElem::Term*> rest;
  for (const auto& t : a.terms()) {
    if (t.first == 0) {
      constant = t.second;
    } else {
      rest.push_back(&t);
    }
  }
  std::vector<std::pair<std::uint64_t, const GroupRingElem::Term*>> ordered;
  for (const auto* t : rest) {
    std::uint64_t sort_key = t->first;
    if (a.arity() == 1) {
      const std::uint32_t i = ctx.log(FieldElem{static_cast<std::uint32_t>(t->first)});
      sort_key = i == 0 ? order : i;
    }
    ordered.emplace_back(sort_key, t);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  std::ostringstream out;
  bool first = true;
  auto emit = [&](const BigInt& c, const std::string& mono) {
    const bool negative = c < 0;
    const BigInt mag = negative ? BigInt(-c) : c;
    if (first) {
      out << (negative ? "-" : "");
    } else {
      out << (negative ? " - " : " + ");
    }
    out << mag.str() << mono;
    first = false;
  };
  if (constant != 0) emit(constant, "");
  for (const auto& [sort_key, t] : ordered) {
    std::string mono;
    if (a.arity() == 1) {
      mono = "·X^{" + render_code(static_cast<std::uint32_t>(t->first)) + "}";
    } else {
      mono = "·X^{(";
      const auto tuple = decode_key(a.space(), t->first);
      for (std::size_t l = 0; l < tuple.size(); ++l) {
        if (l != 0) mono += ",";
        mono += render_code(tuple[l].code);
      }
      mono += ")}";
    }
    emit(t->second, mono);
  }
  return out.str();
}

std::string to_string(const CycloElem& a) {
  std::string out = "[";
  for (std::size_t k = 0; k < a.coeffs().size(); ++k) {
    if (k != 0) out += ", ";
    out += a.coeffs()[k].str();
  }
  return out + "]";
}

nlohmann::ordered_json bigint_to_json(const BigInt& v) {
  if (auto small = to_int64(v)) return *small;
  return v.str();
}

nlohmann::ordered_json to_json(const GroupRingElem& a) {
  nlohmann::ordered_json out;
  out["constant"] = bigint_to_json(a.constant_term());
  auto terms = nlohmann::ordered_json::array();
  for (const auto& [key, c] : a.terms()) {
    if (key == 0) continue;
    nlohmann::ordered_json exp = nlohmann::ordered_json::array();
    for (const auto& e : decode_key(a.space(), key)) exp.push_back(e.code);
    terms.push_back({{"exp", std::move(exp)}, {"coef", bigint_to_json(c)}});
  }
  out["terms"] = std::move(terms);
  return out;
}

}  // namespace permcount
