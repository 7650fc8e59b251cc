#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "permcount/bigint.hpp"
#include "permcount/field.hpp"
#include "permcount/group_ring.hpp"
#include "permcount/permanent.hpp"

namespace permcount {

/// N_q(d) for 1 <= d <= q-2, counting permutation polynomials with f(0) = 0.
struct CountTable {
  std::uint32_t q = 0;
  std::map<std::uint32_t, BigInt> entries;

  BigInt total() const;                            // (q-1)!
  std::map<std::uint32_t, BigInt> lidl_mullen() const;  // d -> q * N_q(d)

  /// Names of the violated invariants (sum rule, divisor rule, N(1) = q-1,
  /// non-negativity); empty when the table is consistent.
  std::vector<std::string> violations() const;

  bool operator==(const CountTable&) const = default;
};

struct Bound {
  BigRational lo;
  BigRational hi;
  bool ok = false;
  bool exact = false;  // false when q^{q/2} was rounded outward
};

struct Timing {
  std::string label;
  double millis = 0;
};

/// Outcome of one route computing N_q(q-2).
struct PermanentReport {
  std::uint32_t q = 0;
  std::uint32_t d = 0;
  std::string route;
  std::optional<GroupRingElem> permanent;  // per(A) (group-ring route)
  std::optional<BigInt> c_minus1;
  std::vector<BigInt> c;                   // c_0..c_{q-2}
  std::optional<BigInt> per_v;
  BigInt n_value;
  std::optional<bool> coefficient_sum_ok;     // c_{-1} + (q-1) c_0 == (q-1)!
  std::optional<bool> per_v_identity_ok;     // (q-1)! + (p-1) per(V) == p (c_{-1} + c_0 (p^{r-1}-1))
  Bound bound;
  std::vector<Timing> timings;
};

/// (q-1)x(q-1) matrix whose (i,j) entry (1-based) is the arity-m monomial
/// with l-th exponent w^{(i-1)l + j}.
RingMatrix<GroupRingElem> build_matrix_A(const FieldCtx& ctx, std::uint32_t m);

/// Entrywise trace-character image of build_matrix_A(ctx, 1).
RingMatrix<CycloElem> build_matrix_V(const FieldCtx& ctx);

/// N_q(q-2) = (q-1)! - c_{-1} from per(A) in the group ring.
PermanentReport count_deg_qm2(const FieldCtx& ctx, const EngineConfig& cfg = {});

/// N_q(q-2) = (q-1)((q-1)! - per(V))/q with per(V) computed in Z[x]/(x^p-1).
/// When `groupring` is given, the cross-route identity is checked too.
PermanentReport count_via_cyclotomic(const FieldCtx& ctx, const EngineConfig& cfg = {},
                                     const PermanentReport* groupring = nullptr);

/// Same as the cyclotomic route with per(V) from the set-partition expansion.
PermanentReport count_via_partition(const FieldCtx& ctx, const EngineConfig& cfg = {},
                                    const PermanentReport* groupring = nullptr);

/// Full multivariate permanent of build_matrix_A(ctx, m).
GroupRingElem multivariate_permanent(const FieldCtx& ctx, std::uint32_t m,
                                     const EngineConfig& cfg = {});

/// G_q(d): constant term of the multivariate permanent with m = q-1-d, i.e. the
/// number of permutations fixing 0 whose interpolating polynomial has degree <= d-1.
BigInt gq(const FieldCtx& ctx, std::uint32_t d, const EngineConfig& cfg = {});

/// N_q(d) for every d by the descending recursion
/// N_q(d) = (q-1)! - N_q(q-2) - ... - N_q(d+1) - G_q(d).
/// Throws IdentityFailure naming the first violated invariant.
CountTable full_table(const FieldCtx& ctx, const EngineConfig& cfg = {});

struct GaussSum {
  std::uint32_t j = 0;
  std::complex<long double> value;
  long double norm_sq = 0;
};

/// lambda_j = sum_{k=0}^{q-2} zeta_p^{Tr(w^k)} zeta_{q-1}^{kj}, j = 0..q-2.
std::vector<GaussSum> gauss_sums(const FieldCtx& ctx);

/// Interval (1-1/q)((q-1)! -+ q^{q/2}/(q-1)) and whether it contains n_value.
Bound bound_check(const FieldCtx& ctx, const BigInt& n_value);

}  // namespace permcount
