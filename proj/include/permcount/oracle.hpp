#pragma once

#include <cstdint>
#include <vector>

#include "permcount/bigint.hpp"
#include "permcount/counting.hpp"
#include "permcount/field.hpp"

namespace permcount {

inline constexpr std::uint64_t kDefaultOracleCap = 40'000'000;

/// A permutation of F_q fixing 0, given by images[i] = f(w^i) for i = 0..q-2.
struct PermutationAssignment {
  std::vector<FieldElem> images;
};

/// Interpolating polynomial sum_{t=1}^{q-2} a_t x^t; coeffs[0] is always 0.
struct Interpolation {
  std::vector<FieldElem> coeffs;
  std::uint32_t degree = 0;
};

/// a_t = -sum_{c != 0} f(c) c^{q-1-t}. With `self_check`, evaluates the result
/// at every point and throws IdentityFailure on a mismatch.
Interpolation interpolate(const FieldCtx& ctx, const PermutationAssignment& f,
                          bool self_check = true);

/// Value of sum_t coeffs[t] x^t at x.
FieldElem evaluate(const FieldCtx& ctx, const std::vector<FieldElem>& coeffs, FieldElem x);

struct OracleOptions {
  std::uint64_t cap = kDefaultOracleCap;  // on (q-1)!
  unsigned threads = 1;
};

/// Degree histogram over all (q-1)! permutations fixing 0, enumerated in
/// lexicographic order of image codes. Throws GuardError("max_oracle").
CountTable brute_force_table(const FieldCtx& ctx, const OracleOptions& opts = {});

/// Number of orderings x_1..x_{q-1} of the nonzero elements with
/// sum_i w^{(i-1)l} x_i = 0 for every l in `exponents`.
BigInt count_restricted_solutions(const FieldCtx& ctx, const std::vector<std::uint32_t>& exponents,
                                  const OracleOptions& opts = {});

}  // namespace permcount
