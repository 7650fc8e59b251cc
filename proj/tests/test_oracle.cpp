#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <random>

#include "permcount/errors.hpp"
#include "permcount/oracle.hpp"

using namespace permcount;

namespace {

PermutationAssignment monomial_map(const FieldCtx& ctx, std::int64_t k) {
  PermutationAssignment f;
  for (std::uint32_t i = 0; i + 1 < ctx.q(); ++i) f.images.push_back(ctx.pow(ctx.omega_pow(i), k));
  return f;
}

// Degree of the Lagrange interpolant of an arbitrary bijection of F_q, by
// solving the Vandermonde system over all q points with Gaussian elimination.
std::uint32_t lagrange_degree(const FieldCtx& ctx, const std::vector<FieldElem>& values) {
  const std::uint32_t q = ctx.q();
  std::vector<std::vector<FieldElem>> rows(q, std::vector<FieldElem>(q + 1));
  for (std::uint32_t x = 0; x < q; ++x) {
    for (std::uint32_t t = 0; t < q; ++t) rows[x][t] = ctx.pow(FieldElem{x}, t);
    rows[x][q] = values[x];
  }
  for (std::uint32_t col = 0; col < q; ++col) {
    std::uint32_t pivot = col;
    while (rows[pivot][col].code == 0) ++pivot;
    std::swap(rows[pivot], rows[col]);
    const FieldElem inv = ctx.inv(rows[col][col]);
    for (auto& e : rows[col]) e = ctx.mul(e, inv);
    for (std::uint32_t r = 0; r < q; ++r) {
      if (r == col || rows[r][col].code == 0) continue;
      const FieldElem factor = rows[r][col];
      for (std::uint32_t c = 0; c <= q; ++c) {
        rows[r][c] = ctx.sub(rows[r][c], ctx.mul(factor, rows[col][c]));
      }
    }
  }
  std::uint32_t degree = 0;
  for (std::uint32_t t = 0; t < q; ++t) {
    if (rows[t][q].code != 0) degree = t;
  }
  return degree;
}

}  // namespace

TEST(Interpolate, Examples) {
  for (auto [p, r] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 2}, {5, 1}, {3, 2}}) {
    const auto ctx = build_field(p, r);
    const auto id = interpolate(ctx, monomial_map(ctx, 1));
    EXPECT_EQ(id.degree, 1u);
    EXPECT_EQ(id.coeffs[1], ctx.one());
    for (std::size_t t = 2; t < id.coeffs.size(); ++t) EXPECT_EQ(id.coeffs[t], ctx.zero());
  }
  const auto f4 = build_field(2, 2);
  const auto sq = interpolate(f4, monomial_map(f4, 2));
  EXPECT_EQ(sq.degree, 2u);
  EXPECT_EQ(sq.coeffs[2], f4.one());
  const auto f5 = build_field(5, 1);
  EXPECT_EQ(interpolate(f5, monomial_map(f5, 3)).degree, 3u);
}

TEST(Interpolate, RejectsInvalidAssignments) {
  const auto f5 = build_field(5, 1);
  EXPECT_THROW(interpolate(f5, PermutationAssignment{{FieldElem{1}, FieldElem{2}}}), InputError);
  EXPECT_THROW(interpolate(f5, PermutationAssignment{{FieldElem{1}, FieldElem{1}, FieldElem{2},
                                                      FieldElem{3}}}),
               InputError);
  EXPECT_THROW(interpolate(f5, PermutationAssignment{{FieldElem{0}, FieldElem{1}, FieldElem{2},
                                                      FieldElem{3}}}),
               InputError);
}

TEST(Interpolate, InvertsEvaluationOnPermutationPolynomials) {
  for (auto [p, r] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 2}, {5, 1}, {7, 1}, {2, 3}}) {
    const auto ctx = build_field(p, r);
    std::mt19937_64 rng(p * 10 + r);
    std::uniform_int_distribution<std::uint32_t> pick(0, ctx.q() - 1);
    int hits = 0;
    for (int s = 0; s < 200000 && hits < 200; ++s) {
      std::vector<FieldElem> coeffs(ctx.q() - 1, ctx.zero());
      for (std::size_t t = 1; t < coeffs.size(); ++t) coeffs[t] = FieldElem{pick(rng)};
      PermutationAssignment f;
      std::vector<bool> seen(ctx.q(), false);
      bool bijective = true;
      for (std::uint32_t i = 0; i + 1 < ctx.q() && bijective; ++i) {
        const FieldElem y = evaluate(ctx, coeffs, ctx.omega_pow(i));
        bijective = y.code != 0 && !seen[y.code];
        seen[y.code] = true;
        f.images.push_back(y);
      }
      if (!bijective) continue;
      ++hits;
      EXPECT_EQ(interpolate(ctx, f).coeffs, coeffs);
    }
    EXPECT_GT(hits, 0) << "q = " << ctx.q();
  }
}

TEST(BruteForce, Examples) {
  EXPECT_EQ(brute_force_table(build_field(2, 2)).entries,
            (std::map<std::uint32_t, BigInt>{{1, 3}, {2, 3}}));
  EXPECT_EQ(brute_force_table(build_field(5, 1)).entries,
            (std::map<std::uint32_t, BigInt>{{1, 4}, {2, 0}, {3, 20}}));
  const auto t8 = brute_force_table(build_field(2, 3));
  EXPECT_EQ(t8.entries.at(6), 4368);
  EXPECT_TRUE(t8.violations().empty());
}

TEST(BruteForce, ShardingIsDeterministic) {
  const auto ctx = build_field(2, 3);
  EXPECT_EQ(brute_force_table(ctx, {kDefaultOracleCap, 1}),
            brute_force_table(ctx, {kDefaultOracleCap, 3}));
  EXPECT_EQ(count_restricted_solutions(ctx, {1, 2}, {kDefaultOracleCap, 1}),
            count_restricted_solutions(ctx, {1, 2}, {kDefaultOracleCap, 5}));
}

TEST(BruteForce, ScalingByQMatchesUnrestrictedCount) {
  // Enumerate every bijection of F_q (0 not fixed) and interpolate over all q
  // points; degree d >= 1 appears q * N_q(d) times.
  for (auto [p, r] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 2}, {5, 1}}) {
    const auto ctx = build_field(p, r);
    std::vector<FieldElem> values(ctx.q());
    for (std::uint32_t x = 0; x < ctx.q(); ++x) values[x] = FieldElem{x};
    std::map<std::uint32_t, BigInt> counts;
    for (std::uint32_t d = 1; d + 2 <= ctx.q(); ++d) counts[d] = 0;
    do {
      counts[lagrange_degree(ctx, values)] += 1;
    } while (std::next_permutation(values.begin(), values.end()));
    EXPECT_EQ(counts, brute_force_table(ctx).lidl_mullen()) << "q = " << ctx.q();
  }
}

TEST(RestrictedSolutions, Examples) {
  EXPECT_EQ(count_restricted_solutions(build_field(2, 2), {1}), 3);
  EXPECT_EQ(count_restricted_solutions(build_field(2, 3), {1}), 672);
  EXPECT_EQ(count_restricted_solutions(build_field(5, 1), {1, 2}), 4);
}

TEST(Oracle, CapIsEnforced) {
  try {
    brute_force_table(build_field(13, 1));
    FAIL();
  } catch (const GuardError& e) {
    EXPECT_EQ(e.guard(), "max_oracle");
  }
  EXPECT_THROW(count_restricted_solutions(build_field(2, 3), {1}, {100, 1}), GuardError);
}
