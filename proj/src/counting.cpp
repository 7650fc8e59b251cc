#include "permcount/counting.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "permcount/errors.hpp"

namespace permcount {

namespace {

class Stopwatch {
 public:
  double millis() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void require_counting_field(const FieldCtx& ctx) {
  if (ctx.q() < 3) throw InputError("counting needs q >= 3");
}

BigInt ipow(std::uint32_t base, std::uint32_t exp) {
  BigInt out = 1;
  for (std::uint32_t i = 0; i < exp; ++i) out *= base;
  return out;
}

// N = (q-1)((q-1)! - per(V)) / q, asserting exact division.
BigInt n_from_per_v(const FieldCtx& ctx, const BigInt& per_v) {
  const BigInt numerator = BigInt(ctx.q() - 1) * (factorial(ctx.q() - 1) - per_v);
  if (numerator % ctx.q() != 0) {
    throw IdentityFailure("exact_division", "(q-1)((q-1)! - per(V)) = " + numerator.str() +
                                                " is not divisible by q = " +
                                                std::to_string(ctx.q()));
  }
  return numerator / ctx.q();
}

// (q-1)! + (p-1) per(V) == p (c_{-1} + c_0 (p^{r-1} - 1))
bool check_per_v_identity(const FieldCtx& ctx, const BigInt& per_v, const PermanentReport& groupring) {
  const BigInt lhs = factorial(ctx.q() - 1) + BigInt(ctx.p() - 1) * per_v;
  const BigInt rhs =
      BigInt(ctx.p()) * (*groupring.c_minus1 + groupring.c.at(0) * (ipow(ctx.p(), ctx.r() - 1) - 1));
  return lhs == rhs;
}

PermanentReport finish_per_v_route(const FieldCtx& ctx, std::string route, BigInt per_v,
                                   const PermanentReport* groupring) {
  PermanentReport report;
  report.q = ctx.q();
  report.d = ctx.q() - 2;
  report.route = std::move(route);
  report.n_value = n_from_per_v(ctx, per_v);
  if (groupring != nullptr && groupring->c_minus1 && !groupring->c.empty()) {
    report.per_v_identity_ok = check_per_v_identity(ctx, per_v, *groupring);
    if (!*report.per_v_identity_ok) {
      throw IdentityFailure("per_v_identity", "per(V) = " + per_v.str() + " from the " + report.route +
                                       " route disagrees with c_{-1} = " +
                                       groupring->c_minus1->str() + ", c_0 = " +
                                       groupring->c[0].str());
    }
  }
  report.per_v = std::move(per_v);
  report.bound = bound_check(ctx, report.n_value);
  return report;
}

}  // namespace

BigInt CountTable::total() const { return factorial(q - 1); }

std::map<std::uint32_t, BigInt> CountTable::lidl_mullen() const {
  std::map<std::uint32_t, BigInt> out;
  for (const auto& [d, n] : entries) out.emplace(d, n * q);
  return out;
}

std::vector<std::string> CountTable::violations() const {
  std::vector<std::string> out;
  BigInt sum = 0;
  bool negative = false;
  bool divisor_ok = true;
  for (const auto& [d, n] : entries) {
    sum += n;
    negative = negative || n < 0;
    if (d > 1 && (q - 1) % d == 0 && n != 0) divisor_ok = false;
  }
  if (sum != total()) out.emplace_back("sum_rule");
  if (!divisor_ok) out.emplace_back("divisor_rule");
  if (q >= 3) {
    auto it = entries.find(1);
    if (it == entries.end() || it->second != q - 1) out.emplace_back("degree_one_rule");
  }
  if (negative) out.emplace_back("non_negative");
  return out;
}

RingMatrix<GroupRingElem> build_matrix_A(const FieldCtx& ctx, std::uint32_t m) {
  require_counting_field(ctx);
  const std::uint32_t n = ctx.q() - 1;
  if (m < 1 || m > ctx.q() - 2) {
    throw InputError("arity m = " + std::to_string(m) + " outside [1, q-2]");
  }
  const KeySpace ks = key_space(ctx, m);
  RingMatrix<GroupRingElem> a(n, n);
  std::vector<FieldElem> tuple(m);
  for (std::uint32_t i = 1; i <= n; ++i) {
    for (std::uint32_t j = 1; j <= n; ++j) {
      for (std::uint32_t l = 1; l <= m; ++l) {
        tuple[l - 1] = ctx.omega_pow(static_cast<std::int64_t>(i - 1) * l + j);
      }
      a(i - 1, j - 1) = GroupRingElem(ks, {{encode_key(ctx, tuple), BigInt(1)}});
    }
  }
  return a;
}

RingMatrix<CycloElem> build_matrix_V(const FieldCtx& ctx) {
  return build_matrix_A(ctx, 1).unaryExpr(
      [&ctx](const GroupRingElem& e) { return eval_trace_character(ctx, e); });
}

PermanentReport count_deg_qm2(const FieldCtx& ctx, const EngineConfig& cfg) {
  require_counting_field(ctx);
  Stopwatch clock;
  const auto a = build_matrix_A(ctx, 1);
  GroupRingElem per = permanent_ryser(a, {cfg.max_ryser, cfg.threads});

  PermanentReport report;
  report.q = ctx.q();
  report.d = ctx.q() - 2;
  report.route = "groupring";
  report.c_minus1 = per.constant_term();
  for (std::uint32_t i = 0; i + 1 < ctx.q(); ++i) {
    report.c.push_back(per.coefficient(ctx.omega_pow(i).code));
  }
  for (std::size_t i = 1; i < report.c.size(); ++i) {
    if (report.c[i] != report.c[0]) {
      throw IdentityFailure("coefficient_flatness", "c_" + std::to_string(i) + " = " +
                                                        report.c[i].str() + " but c_0 = " +
                                                        report.c[0].str());
    }
  }
  const BigInt total = factorial(ctx.q() - 1);
  report.coefficient_sum_ok = *report.c_minus1 + BigInt(ctx.q() - 1) * report.c[0] == total;
  if (!*report.coefficient_sum_ok) {
    throw IdentityFailure("coefficient_sum", "c_{-1} + (q-1) c_0 != (q-1)! with c_{-1} = " +
                                     report.c_minus1->str() + ", c_0 = " + report.c[0].str());
  }
  report.n_value = total - *report.c_minus1;
  report.permanent = std::move(per);
  report.bound = bound_check(ctx, report.n_value);
  report.timings.push_back({"groupring", clock.millis()});
  return report;
}

PermanentReport count_via_cyclotomic(const FieldCtx& ctx, const EngineConfig& cfg,
                                     const PermanentReport* groupring) {
  require_counting_field(ctx);
  Stopwatch clock;
  const auto v = build_matrix_V(ctx);
  const CycloElem per = permanent_ryser(v, {cfg.max_ryser, cfg.threads});
  auto report = finish_per_v_route(ctx, "cyclotomic", cyclo_as_integer(per), groupring);
  report.timings.push_back({"cyclotomic", clock.millis()});
  return report;
}

PermanentReport count_via_partition(const FieldCtx& ctx, const EngineConfig& cfg,
                                    const PermanentReport* groupring) {
  require_counting_field(ctx);
  Stopwatch clock;
  auto report =
      finish_per_v_route(ctx, "partition", per_v_partition(ctx, cfg.max_bell), groupring);
  report.timings.push_back({"partition", clock.millis()});
  return report;
}

GroupRingElem multivariate_permanent(const FieldCtx& ctx, std::uint32_t m,
                                     const EngineConfig& cfg) {
  return permanent_ryser(build_matrix_A(ctx, m), {cfg.max_ryser, cfg.threads});
}

BigInt gq(const FieldCtx& ctx, std::uint32_t d, const EngineConfig& cfg) {
  require_counting_field(ctx);
  if (d < 1 || d > ctx.q() - 2) {
    throw InputError("degree d = " + std::to_string(d) + " outside [1, q-2]");
  }
  const auto a = build_matrix_A(ctx, ctx.q() - 1 - d);
  // Constant term of the product of the row sums, split into two halves so the
  // full q^m-key product is never formed.
  auto constant_term_fold = [](std::span<const GroupRingElem> sums) {
    const std::size_t half = sums.size() / 2;
    GroupRingElem left = sums[0];
    for (std::size_t i = 1; i < half; ++i) left = left * sums[i];
    GroupRingElem right = sums[half];
    for (std::size_t i = half + 1; i < sums.size(); ++i) right = right * sums[i];
    return constant_term_of_product(left, right);
  };
  return ryser_fold(a, constant_term_fold, cfg.max_ryser, cfg.threads);
}

CountTable full_table(const FieldCtx& ctx, const EngineConfig& cfg) {
  require_counting_field(ctx);
  CountTable table;
  table.q = ctx.q();
  const BigInt total = table.total();
  const std::uint32_t top = ctx.q() - 2;
  table.entries[top] = count_deg_qm2(ctx, cfg).n_value;
  BigInt above = table.entries[top];  // N_q(q-2) + ... + N_q(d+1)
  for (std::uint32_t d = top; d-- > 1;) {
    table.entries[d] = total - above - gq(ctx, d, cfg);
    above += table.entries[d];
  }
  if (const auto bad = table.violations(); !bad.empty()) {
    throw IdentityFailure(bad.front(), "count table for q = " + std::to_string(ctx.q()) +
                                           " violates " + bad.front());
  }
  return table;
}

std::vector<GaussSum> gauss_sums(const FieldCtx& ctx) {
  const std::uint32_t order = ctx.q() - 1;
  const long double two_pi = 2 * std::numbers::pi_v<long double>;
  std::vector<GaussSum> out;
  out.reserve(order);
  for (std::uint32_t j = 0; j < order; ++j) {
    std::complex<long double> sum = 0;
    for (std::uint32_t k = 0; k < order; ++k) {
      const long double additive =
          static_cast<long double>(ctx.trace(ctx.omega_pow(k))) / ctx.p();
      const long double multiplicative =
          static_cast<long double>((static_cast<std::uint64_t>(k) * j) % order) / order;
      sum += std::polar(1.0L, two_pi * (additive + multiplicative));
    }
    out.push_back({j, sum, std::norm(sum)});
  }
  return out;
}

Bound bound_check(const FieldCtx& ctx, const BigInt& n_value) {
  const std::uint32_t q = ctx.q();
  const BigInt q_to_q = ipow(q, q);
  BigInt root = boost::multiprecision::sqrt(q_to_q);  // floor(q^{q/2})
  Bound out;
  out.exact = root * root == q_to_q;
  if (!out.exact) root += 1;  // outward: both endpoints use an upper estimate
  const BigRational scale(BigInt(q - 1), BigInt(q));
  const BigRational total(factorial(q - 1));
  const BigRational slack(root, BigInt(q - 1));
  out.lo = scale * (total - slack);
  out.hi = scale * (total + slack);
  const BigRational n(n_value);
  out.ok = out.lo <= n && n <= out.hi;
  return out;
}

}  // namespace permcount
