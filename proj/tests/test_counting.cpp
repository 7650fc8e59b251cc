#include <gtest/gtest.h>

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "permcount/counting.hpp"
#include "permcount/errors.hpp"
#include "permcount/oracle.hpp"

using namespace permcount;

namespace {

std::vector<std::pair<std::uint32_t, std::uint32_t>> small_fields() {
  return {{3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}};
}

// Exponent i of the single-variable monomial X^{w^i}, in [1, q-1].
std::uint32_t exponent_of(const FieldCtx& ctx, const GroupRingElem& e) {
  const auto t = decode_key(e.space(), e.terms().at(0).first);
  const std::uint32_t lg = ctx.log(t[0]);
  return lg == 0 ? ctx.q() - 1 : lg;
}

}  // namespace

TEST(MatrixA, F4Display) {
  const auto f4 = build_field(2, 2);
  const auto a = build_matrix_A(f4, 1);
  const std::uint32_t expected[3][3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_EQ(exponent_of(f4, a(i, j)), expected[i][j]);
  }
}

TEST(MatrixA, CirculantShapeAndFirstRow) {
  for (auto [p, r] : small_fields()) {
    const auto ctx = build_field(p, r);
    const auto a = build_matrix_A(ctx, 1);
    const std::uint32_t n = ctx.q() - 1;
    for (std::uint32_t j = 1; j <= n; ++j) {
      EXPECT_EQ(a(0, j - 1), monomial(ctx, ctx.omega_pow(j)));
    }
    for (std::uint32_t i = 1; i <= n; ++i) {
      for (std::uint32_t j = 1; j <= n; ++j) {
        EXPECT_EQ(exponent_of(ctx, a(i - 1, j - 1)), (i + j - 2) % n + 1);
      }
    }
  }
  const auto f8 = build_field(2, 3);
  EXPECT_EQ(build_matrix_A(f8, 1).rows(), 7);
}

TEST(MatrixA, MultivariateEntries) {
  const auto f7 = build_field(7, 1);
  const auto a = build_matrix_A(f7, 3);
  for (std::int64_t i = 1; i <= 6; ++i) {
    for (std::int64_t j = 1; j <= 6; ++j) {
      std::vector<FieldElem> expected;
      for (std::int64_t l = 1; l <= 3; ++l) expected.push_back(f7.omega_pow((i - 1) * l + j));
      EXPECT_EQ(a(i - 1, j - 1), monomial(f7, expected));
    }
  }
  EXPECT_THROW(build_matrix_A(f7, 0), InputError);
  EXPECT_THROW(build_matrix_A(f7, 6), InputError);
  EXPECT_THROW(build_matrix_A(build_field(2, 1), 1), InputError);
}

TEST(CountRoutes, GroupRingExamples) {
  const auto r4 = count_deg_qm2(build_field(2, 2));
  EXPECT_EQ(*r4.c_minus1, 3);
  EXPECT_EQ(r4.n_value, 3);
  EXPECT_TRUE(*r4.coefficient_sum_ok);

  const auto r8 = count_deg_qm2(build_field(2, 3));
  EXPECT_EQ(*r8.c_minus1, 672);
  EXPECT_EQ(r8.c, std::vector<BigInt>(7, BigInt(624)));
  EXPECT_EQ(r8.n_value, 4368);

  EXPECT_EQ(count_deg_qm2(build_field(5, 1)).n_value, 20);
}

TEST(CountRoutes, CyclotomicAndPartitionExamples) {
  struct Case {
    std::uint32_t p, r;
    int per_v, n;
  };
  for (const Case& c : {Case{2, 2, 2, 3}, Case{2, 3, 48, 4368}, Case{5, 1, -1, 20}}) {
    const auto ctx = build_field(c.p, c.r);
    const auto gr = count_deg_qm2(ctx);
    const auto cy = count_via_cyclotomic(ctx, {}, &gr);
    const auto pa = count_via_partition(ctx, {}, &gr);
    EXPECT_EQ(*cy.per_v, c.per_v);
    EXPECT_EQ(*pa.per_v, c.per_v);
    EXPECT_EQ(cy.n_value, c.n);
    EXPECT_EQ(pa.n_value, c.n);
    EXPECT_TRUE(*cy.per_v_identity_ok);
    EXPECT_TRUE(*pa.per_v_identity_ok);
    EXPECT_TRUE(cy.bound.ok);
  }
}

TEST(CountRoutes, RoutesAgreeAndIdentitiesHold) {
  for (auto [p, r] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
           {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {11, 1}, {13, 1}}) {
    const auto ctx = build_field(p, r);
    const auto gr = count_deg_qm2(ctx);
    const auto cy = count_via_cyclotomic(ctx, {}, &gr);
    const auto pa = count_via_partition(ctx, {}, &gr);
    EXPECT_EQ(gr.n_value, cy.n_value) << "q = " << ctx.q();
    EXPECT_EQ(gr.n_value, pa.n_value) << "q = " << ctx.q();
    EXPECT_EQ(*gr.c_minus1 + BigInt(ctx.q() - 1) * gr.c[0], factorial(ctx.q() - 1));
    EXPECT_TRUE(gr.bound.ok);
  }
}

TEST(CountRoutes, PerVIdentityMismatchIsReported) {
  const auto ctx = build_field(2, 3);
  auto gr = count_deg_qm2(ctx);
  *gr.c_minus1 += 1;
  try {
    count_via_cyclotomic(ctx, {}, &gr);
    FAIL();
  } catch (const IdentityFailure& e) {
    EXPECT_EQ(e.identity(), "per_v_identity");
  }
}

TEST(Gq, Examples) {
  EXPECT_EQ(gq(build_field(2, 2), 1), 0);
  EXPECT_EQ(gq(build_field(5, 1), 3), 4);
  EXPECT_EQ(gq(build_field(2, 2), 2), 3);
  EXPECT_THROW(gq(build_field(5, 1), 0), InputError);
  EXPECT_THROW(gq(build_field(5, 1), 4), InputError);
}

TEST(Gq, MatchesFullMultivariateConstantTerm) {
  for (auto [p, r] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 2}, {5, 1}, {7, 1}}) {
    const auto ctx = build_field(p, r);
    for (std::uint32_t d = 1; d + 2 <= ctx.q(); ++d) {
      const auto full = multivariate_permanent(ctx, ctx.q() - 1 - d);
      EXPECT_EQ(gq(ctx, d), full.constant_term()) << "q = " << ctx.q() << ", d = " << d;
    }
  }
  const auto f8 = build_field(2, 3);
  for (std::uint32_t d = 4; d <= 6; ++d) {
    EXPECT_EQ(gq(f8, d), multivariate_permanent(f8, 7 - d).constant_term());
  }
}

TEST(Gq, MatchesRestrictedSolutionCount) {
  for (auto [p, r] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 2}, {5, 1}, {7, 1}}) {
    const auto ctx = build_field(p, r);
    for (std::uint32_t d = 1; d + 2 <= ctx.q(); ++d) {
      std::vector<std::uint32_t> rows(ctx.q() - 1 - d);
      std::iota(rows.begin(), rows.end(), 1u);
      EXPECT_EQ(gq(ctx, d), count_restricted_solutions(ctx, rows));
    }
  }
}

TEST(FullTable, Examples) {
  const auto t4 = full_table(build_field(2, 2));
  EXPECT_EQ(t4.entries, (std::map<std::uint32_t, BigInt>{{1, 3}, {2, 3}}));
  EXPECT_EQ(t4.total(), 6);
  EXPECT_EQ(t4.lidl_mullen(), (std::map<std::uint32_t, BigInt>{{1, 12}, {2, 12}}));

  const auto t5 = full_table(build_field(5, 1));
  EXPECT_EQ(t5.entries, (std::map<std::uint32_t, BigInt>{{1, 4}, {2, 0}, {3, 20}}));

  const auto t7 = full_table(build_field(7, 1));
  EXPECT_EQ(t7.entries.at(2), 0);
  EXPECT_EQ(t7.entries.at(3), 0);
  EXPECT_TRUE(t7.violations().empty());
}

TEST(FullTable, MatchesOracle) {
  for (auto [p, r] : small_fields()) {
    const auto ctx = build_field(p, r);
    const auto table = full_table(ctx);
    EXPECT_EQ(table, brute_force_table(ctx)) << "q = " << ctx.q();
    EXPECT_TRUE(table.violations().empty());
  }
}

TEST(FullTable, ThreadCountDoesNotChangeResults) {
  const auto ctx = build_field(2, 3);
  EngineConfig one, many;
  many.threads = 4;
  EXPECT_EQ(full_table(ctx, one), full_table(ctx, many));
}

TEST(FullTable, ModulusIndependence) {
  const auto a = full_table(build_field(3, 2, std::vector<std::uint32_t>{1, 0, 1}));
  const auto b = full_table(build_field(3, 2, std::vector<std::uint32_t>{2, 1, 1}));
  EXPECT_EQ(a, b);
  const auto c = full_table(build_field(2, 3, std::vector<std::uint32_t>{1, 1, 0, 1}));
  const auto d = full_table(build_field(2, 3, std::vector<std::uint32_t>{1, 0, 1, 1}));
  EXPECT_EQ(c, d);
}

TEST(CountTable, ViolationsAreNamed) {
  CountTable t;
  t.q = 5;
  t.entries = {{1, 4}, {2, 1}, {3, 19}};
  auto v = t.violations();
  EXPECT_NE(std::find(v.begin(), v.end(), "divisor_rule"), v.end());
  t.entries = {{1, 3}, {2, 0}, {3, 20}};
  v = t.violations();
  EXPECT_NE(std::find(v.begin(), v.end(), "sum_rule"), v.end());
  EXPECT_NE(std::find(v.begin(), v.end(), "degree_one_rule"), v.end());
  t.entries = {{1, 4}, {2, 0}, {3, 21}, {4, -1}};
  v = t.violations();
  EXPECT_NE(std::find(v.begin(), v.end(), "non_negative"), v.end());
}

TEST(GaussSums, TrivialAndNontrivialCharacters) {
  for (auto [p, r] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
           {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {2, 4}, {3, 3}, {11, 1}, {13, 1}}) {
    const auto ctx = build_field(p, r);
    const auto sums = gauss_sums(ctx);
    ASSERT_EQ(sums.size(), ctx.q() - 1);
    EXPECT_NEAR(static_cast<double>(sums[0].value.real()), -1.0, 1e-9);
    EXPECT_NEAR(static_cast<double>(sums[0].value.imag()), 0.0, 1e-9);
    for (std::size_t j = 1; j < sums.size(); ++j) {
      EXPECT_NEAR(static_cast<double>(sums[j].norm_sq / ctx.q()), 1.0, 1e-9)
          << "q = " << ctx.q() << ", j = " << j;
    }
  }
}

TEST(GaussSums, SingularValuesOfComplexV) {
  // V depends on i+j only, so V = (anti-diagonal permutation) * circulant and its
  // singular values are the moduli of the DFT of the additive character along w^k.
  for (auto [p, r] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 2}, {5, 1}, {2, 3}, {3, 2}}) {
    const auto ctx = build_field(p, r);
    const auto n = static_cast<Eigen::Index>(ctx.q() - 1);
    Eigen::MatrixXcd v(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        v(i, j) = std::polar(1.0, 2 * std::numbers::pi * ctx.trace(ctx.omega_pow(i + j + 1)) / p);
      }
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
    std::vector<double> singular(svd.singularValues().data(), svd.singularValues().data() + n);
    std::vector<double> moduli;
    for (const auto& g : gauss_sums(ctx)) moduli.push_back(std::sqrt(static_cast<double>(g.norm_sq)));
    std::sort(singular.begin(), singular.end());
    std::sort(moduli.begin(), moduli.end());
    for (Eigen::Index k = 0; k < n; ++k) EXPECT_NEAR(singular[k], moduli[k], 1e-9);
  }
}

TEST(Bound, Examples) {
  const auto b8 = bound_check(build_field(2, 3), 4368);
  EXPECT_EQ(b8.lo, BigRational(3898));
  EXPECT_EQ(b8.hi, BigRational(4922));
  EXPECT_TRUE(b8.ok);
  EXPECT_TRUE(b8.exact);

  const auto b4 = bound_check(build_field(2, 2), 3);
  EXPECT_EQ(b4.lo, BigRational(1, 2));
  EXPECT_EQ(b4.hi, BigRational(17, 2));
  EXPECT_TRUE(b4.ok);

  // q^{q/2} = 25 sqrt 5 is irrational; 56 > 55.9 is used on both sides.
  const auto b5 = bound_check(build_field(5, 1), 20);
  EXPECT_FALSE(b5.exact);
  EXPECT_EQ(b5.lo, BigRational(8));
  EXPECT_EQ(b5.hi, BigRational(152, 5));
  EXPECT_TRUE(b5.ok);
  const double true_lo = 0.8 * (24 - 25 * std::sqrt(5.0) / 4);
  const double true_hi = 0.8 * (24 + 25 * std::sqrt(5.0) / 4);
  EXPECT_LE(b5.lo.convert_to<double>(), true_lo);
  EXPECT_GE(b5.hi.convert_to<double>(), true_hi);

  EXPECT_FALSE(bound_check(build_field(2, 3), 5000).ok);
  EXPECT_FALSE(bound_check(build_field(2, 3), 3000).ok);
}
