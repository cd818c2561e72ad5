#include <gtest/gtest.h>

#include <random>

#include <boost/multiprecision/mpfr.hpp>

#include "generators.hpp"
#include "wshift/hypercontraction.hpp"
#include "wshift/truncation.hpp"

using namespace wshift;

TEST(SqrtMonomial, ProductsAndGram) {
  SqrtMonomialMatrix a(3), b(3);
  a.set(0, 1, Rational{2});
  a.set(1, 2, Rational{3});
  b.set(1, 2, Rational{1, 4});
  const auto ab = a * b;
  ASSERT_TRUE(ab.column(2).has_value());
  EXPECT_EQ(ab.column(2)->row, 0u);
  EXPECT_EQ(ab.column(2)->square, Rational(1, 2));
  EXPECT_EQ(ab.nonzeros(), 1u);
  EXPECT_EQ(a * SqrtMonomialMatrix::identity(3), a);
  EXPECT_EQ(a.gram_diagonal(), (std::vector<Rational>{0, 2, 3}));

  SqrtMonomialMatrix clash(2);
  clash.set(0, 0, Rational{1});
  clash.set(0, 1, Rational{1});
  EXPECT_THROW(clash.gram_diagonal(), std::logic_error);
}

TEST(Truncate, HardyShiftIsJordanBlock) {
  const auto tt = build_truncated(WeightFunction::power_kernel(1, 1), 3);
  ASSERT_EQ(tt.size(), 4u);
  const auto& T = tt.shifts[0];
  EXPECT_FALSE(T.column(0).has_value());
  for (std::size_t c = 1; c < 4; ++c) {
    ASSERT_TRUE(T.column(c).has_value());
    EXPECT_EQ(T.column(c)->row, c - 1);
    EXPECT_EQ(T.column(c)->square, 1);
  }
}

TEST(Truncate, DegreeZeroIsZeroMatrix) {
  const auto tt = build_truncated(WeightFunction::power_kernel(2, 2), 0);
  ASSERT_EQ(tt.size(), 1u);
  for (const auto& T : tt.shifts) EXPECT_EQ(T.nonzeros(), 0u);
}

TEST(Truncate, TwoVariablesDegreeOne) {
  const auto tt = build_truncated(WeightFunction::power_kernel(2, 2), 1);
  ASSERT_EQ(tt.size(), 3u);
  EXPECT_EQ(tt.position(MultiIndex{1, 0}), 1u);
  EXPECT_EQ(tt.position(MultiIndex{0, 1}), 2u);
  EXPECT_THROW(tt.position(MultiIndex{1, 1}), std::out_of_range);
  EXPECT_EQ(tt.shifts[0].column(1)->square, Rational(1, 2));
  EXPECT_EQ(tt.shifts[0].column(1)->row, 0u);
  EXPECT_FALSE(tt.shifts[0].column(2).has_value());
  EXPECT_EQ(tt.shifts[1].column(2)->square, Rational(1, 2));
}

TEST(Truncate, CommutatorsVanish) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = 2 + trial % 2;
    const auto tt = build_truncated(gen::random_weight(rng, m, 6), 6);
    const auto checks = commutator_checks(tt);
    EXPECT_EQ(checks.size(), m * (m - 1) / 2);
    for (const auto& c : checks) {
      EXPECT_EQ(c.mismatched_columns, 0u);
      EXPECT_EQ(c.frobenius, 0.0);
    }
  }
}

TEST(Defect, PowerKernelOperatorIsOriginProjection) {
  for (unsigned n = 1; n <= 4; ++n) {
    const auto tt = build_truncated(WeightFunction::power_kernel(n, 2), 6);
    const auto d = defect_operator(tt, n);
    EXPECT_EQ(d[0], 1);
    for (std::size_t p = 1; p < d.size(); ++p) EXPECT_EQ(d[p], 0) << tt.basis[p].str();
  }
}

TEST(Defect, OperatorMatchesDiagonalFormula) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t m = 1 + trial % 3;
    const auto W = gen::random_weight(rng, m, 6);
    const auto tt = build_truncated(W, 6);
    for (unsigned k = 1; k <= 4; ++k) {
      const auto d = defect_operator(tt, k);
      for (std::size_t p = 0; p < tt.size(); ++p) ASSERT_EQ(d[p], defect_diag(W, k, tt.basis[p]));
    }
  }
}

TEST(PowerDiag, ExamplesAndFirstOrder) {
  const auto tt = build_truncated(WeightFunction::power_kernel(2, 1), 5);
  EXPECT_EQ(decay_curve(tt, MultiIndex{3}, 4),
            (std::vector<Rational>{1, Rational(3, 4), Rational(2, 4), Rational(1, 4), 0}));
  EXPECT_THROW(decay_curve(tt, MultiIndex{6}, 2), std::out_of_range);

  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const auto tt2 = build_truncated(gen::random_weight(rng, 2, 7), 7);
    const auto one = m_power_diag(tt2, 1), d1 = defect_operator(tt2, 1);
    for (std::size_t p = 0; p < one.size(); ++p) EXPECT_EQ(one[p], 1 - d1[p]);
    for (const auto& v : m_power_diag(tt2, 0)) EXPECT_EQ(v, 1);
  }
}

TEST(PowerDiag, BinomialExpansionOfDefect) {
  // The defect is the alternating binomial sum of the powers of M_T.
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 8; ++trial) {
    const auto tt = build_truncated(gen::random_weight(rng, 2, 6), 6);
    for (unsigned k = 1; k <= 4; ++k) {
      std::vector<Rational> sum(tt.size(), Rational{0});
      Integer binom{1};
      for (unsigned j = 0; j <= k; ++j) {
        const auto mj = m_power_diag(tt, j);
        for (std::size_t p = 0; p < sum.size(); ++p) sum[p] += (j % 2 ? -1 : 1) * Rational{binom} * mj[p];
        binom = binom * (k - j) / (j + 1);
      }
      EXPECT_EQ(sum, defect_operator(tt, k));
    }
  }
}

TEST(FloatPath, DenseAgreesWithExact) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t m = 1 + trial % 2;
    const auto tt = build_truncated(gen::random_weight(rng, m, 8), 8);
    for (unsigned k = 1; k <= 3; ++k) {
      const auto exact = defect_operator(tt, k);
      const auto fl = float_defect_operator<double>(tt, k);
      EXPECT_FALSE(fl.sparse);
      EXPECT_EQ(fl.max_off_diagonal, 0.0);
      for (std::size_t p = 0; p < exact.size(); ++p) {
        const double e = to_real<double>(exact[p]);
        EXPECT_NEAR(fl.diagonal[p], e, 1e-12 * std::max(1.0, std::abs(e)));
      }
    }
  }
}

TEST(FloatPath, SparseAgreesWithExact) {
  const auto tt = build_truncated(WeightFunction::power_kernel(3, 1), 40);
  for (unsigned k = 1; k <= 4; ++k) {
    const auto exact = defect_operator(tt, k);
    const auto fl = float_defect_operator<double>(tt, k);
    EXPECT_TRUE(fl.sparse);
    for (std::size_t p = 0; p < exact.size(); ++p) {
      const double e = to_real<double>(exact[p]);
      EXPECT_NEAR(fl.diagonal[p], e, 1e-12 * std::max(1.0, std::abs(e)));
    }
  }
}

TEST(FloatPath, HighPrecisionScalar) {
  PrecisionScope scope(200);
  const auto tt = build_truncated(WeightFunction::power_kernel(2, 2), 5);
  const auto fl = float_defect_operator<HighPrecision>(tt, 2);
  EXPECT_LT(abs(fl.diagonal[0] - 1), HighPrecision{1e-50});
  for (std::size_t p = 1; p < fl.diagonal.size(); ++p) EXPECT_LT(abs(fl.diagonal[p]), HighPrecision{1e-50});
}
