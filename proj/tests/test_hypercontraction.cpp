#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "wshift/hypercontraction.hpp"

using namespace wshift;

TEST(Defect, OriginIsAlwaysOne) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto W = gen::random_weight(rng, 2, 6);
    for (unsigned k = 1; k <= 4; ++k) EXPECT_EQ(defect_diag(W, k, MultiIndex{0, 0}), 1);
  }
}

TEST(Defect, SmallExamples) {
  EXPECT_EQ(defect_diag(WeightFunction::power_kernel(2, 2), 2, MultiIndex{1, 0}), 0);
  EXPECT_EQ(defect_diag(WeightFunction::power_kernel(1, 2), 1, MultiIndex{1, 1}), 0);
  EXPECT_THROW(defect_diag(WeightFunction::power_kernel(1, 2), 0, MultiIndex{1, 1}), std::domain_error);
  EXPECT_THROW(defect_diag(WeightFunction::power_kernel(1, 2), 1, MultiIndex{1}), DimensionMismatch);
}

TEST(Defect, RadialReductionExamples) {
  for (unsigned n = 1; n <= 5; ++n) {
    const auto a = RadialSequence::power(n);
    EXPECT_EQ(defect_diag_radial(a, n, 0), 1);
    for (unsigned N = 1; N <= 12; ++N) EXPECT_EQ(defect_diag_radial(a, n, N), 0);
  }
  for (unsigned N = 1; N <= 10; ++N)
    EXPECT_EQ(defect_diag_radial(RadialSequence::geometric(Rational{2}), 1, N), Rational(1, 2));
  EXPECT_THROW(defect_diag_radial(RadialSequence::list({Rational{1}}), 1, 1), SequenceExhausted);
}

TEST(Defect, RadialAndGeneralFormulasAgree) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t m = 1 + trial % 3;
    const RadialSequence a = trial % 2 ? gen::random_list_profile(rng, 13)
                                       : RadialSequence::geometric(gen::random_rational(rng, 1, 7, 3));
    const auto W = WeightFunction::radial(a, m);
    for (const auto& alpha : enumerate_leq_degree(m, m == 3 ? 8 : 12))
      for (unsigned k = 1; k <= 5; ++k)
        ASSERT_EQ(defect_diag(W, k, alpha), defect_diag_radial(a, k, degree(alpha))) << alpha.str() << " k=" << k;
  }
}

TEST(Defect, PowerKernelSignPattern) {
  for (unsigned n = 1; n <= 4; ++n) {
    const auto P = WeightFunction::power_kernel(n, 2);
    for (const auto& alpha : enumerate_leq_degree(2, 10)) {
      if (alpha.is_zero()) continue;
      EXPECT_EQ(defect_diag(P, n, alpha), 0);
      for (unsigned k = 1; k < n; ++k) EXPECT_GT(defect_diag(P, k, alpha), 0);
    }
  }
}

TEST(Defect, FirstOrderIsOneMinusIncomingRatios) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto W = gen::random_weight(rng, 2, 8);
    for (const auto& alpha : enumerate_leq_degree(2, 8)) {
      if (alpha.is_zero()) continue;
      const auto check = necessary_condition(W, 1, alpha);
      EXPECT_EQ(defect_diag(W, 1, alpha), 1 - check.lhs);
      EXPECT_EQ(check.holds, defect_diag(W, 1, alpha) >= 0);
    }
  }
}

TEST(HyperScan, PowerKernelHasNoViolation) {
  for (unsigned n = 1; n <= 3; ++n) {
    const auto r = is_n_hyper_up_to(WeightFunction::power_kernel(n, 2), n, 12);
    EXPECT_FALSE(r.violated());
    EXPECT_EQ(r.verdict_string(), "no-violation-up-to-D=12");
    EXPECT_EQ(r.entries_checked, n * 91u);
  }
}

TEST(HyperScan, ConstantProfileFailsSecondOrderAtDegreeOne) {
  // d_2 vanishes for N >= 2, but d_2(1) = 1 - 2 a(0)/a(1) = -1.
  const auto W = WeightFunction::radial(RadialSequence::polynomial({Rational{1}}), 1);
  const auto r = is_n_hyper_up_to(W, 2, 10);
  ASSERT_TRUE(r.violated());
  EXPECT_EQ(r.witness->k, 2u);
  EXPECT_EQ(r.witness->alpha, MultiIndex{1});
  EXPECT_EQ(r.witness->value, -1);
  for (unsigned N = 2; N <= 10; ++N) EXPECT_EQ(defect_diag(W, 2, MultiIndex{N}), 0);
  EXPECT_FALSE(is_n_hyper_up_to(W, 1, 10).violated());
}

TEST(HyperScan, DecreasingProfileViolatesAtFirstDegree) {
  std::vector<Rational> a;
  for (unsigned i = 0; i <= 10; ++i) a.push_back(Rational{1, i + 1});
  const auto W = WeightFunction::radial(RadialSequence::list(a), 1);
  const auto r = is_n_hyper_up_to(W, 1, 5);
  ASSERT_TRUE(r.violated());
  EXPECT_EQ(r.witness->k, 1u);
  EXPECT_EQ(r.witness->alpha, MultiIndex{1});
  EXPECT_EQ(r.witness->value, Rational(-1));
  EXPECT_LT(r.witness->value, 0);
  EXPECT_EQ(r.verdict_string(), "violation");
}

TEST(HyperScan, WitnessIsFirstInScanOrder) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto W = gen::random_table_weight(rng, 2, 5, 0.4);
    const auto r = is_n_hyper_up_to(W, 3, 5);
    std::optional<std::pair<unsigned, MultiIndex>> first;
    for (unsigned k = 1; k <= 3 && !first; ++k)
      for (const auto& alpha : enumerate_leq_degree(2, 5))
        if (defect_diag(W, k, alpha) < 0) {
          first = {k, alpha};
          break;
        }
    ASSERT_EQ(r.violated(), first.has_value());
    if (first) {
      EXPECT_EQ(r.witness->k, first->first);
      EXPECT_EQ(r.witness->alpha, first->second);
    }
  }
}

TEST(Necessary, PowerKernelIsSharp) {
  for (unsigned n = 1; n <= 4; ++n) {
    const auto P = WeightFunction::power_kernel(n, 3);
    for (const auto& alpha : enumerate_leq_degree(3, 8)) {
      if (alpha.is_zero()) continue;
      const auto c = necessary_condition(P, n, alpha);
      EXPECT_EQ(c.lhs, c.rhs);
      EXPECT_TRUE(c.holds);
    }
  }
  const auto c = necessary_condition(WeightFunction::power_kernel(1, 2), 1, MultiIndex{1, 0});
  EXPECT_EQ(c.lhs, 1);
  EXPECT_EQ(c.rhs, 1);
  EXPECT_THROW(necessary_condition(WeightFunction::power_kernel(1, 2), 1, MultiIndex{0, 0}), std::domain_error);
}

TEST(Necessary, PerturbedWitness) {
  const auto W = WeightFunction::perturbed45(2, 2, 2);
  const auto c = necessary_condition(W, 2, MultiIndex{2, 511});
  EXPECT_FALSE(c.holds);
  EXPECT_EQ(c.lhs, Rational(2 * 513, 514));
  EXPECT_EQ(c.lhs, Rational(513, 257));
  EXPECT_EQ(c.rhs, Rational(513, 514));
}

TEST(Necessary, RadialForm) {
  for (unsigned n = 1; n <= 4; ++n)
    for (unsigned i = 1; i <= 20; ++i) {
      const auto a = RadialSequence::power(n);
      EXPECT_TRUE(radial_necessary(a, n, i));
      EXPECT_EQ(a(i - 1) / a(i), Rational(i, i + n - 1));
    }
  EXPECT_FALSE(radial_necessary(RadialSequence::polynomial({Rational{1}}), 2, 1));
  EXPECT_TRUE(radial_necessary(RadialSequence::geometric(Rational{2}), 1, 3));
  EXPECT_THROW(radial_necessary(RadialSequence::power(1), 1, 0), std::domain_error);
}

TEST(Necessary, ContrapositiveOnRandomTables) {
  // A violated necessary condition at alpha forces a negative d_n somewhere below alpha.
  std::mt19937_64 rng(77);
  int violations = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto W = gen::random_table_weight(rng, 2, 6, 0.35);
    for (unsigned n = 1; n <= 3; ++n)
      for (const auto& alpha : enumerate_leq_degree(2, 6)) {
        if (alpha.is_zero() || necessary_condition(W, n, alpha).holds) continue;
        ++violations;
        bool negative = false;
        for (const auto& below : enumerate_below(alpha))
          if (defect_diag(W, n, below) < 0) negative = true;
        EXPECT_TRUE(negative) << alpha.str() << " n=" << n;
      }
  }
  EXPECT_GT(violations, 0);
}

TEST(Obstruction, ClosedFormMatchesLinearScan) {
  std::mt19937_64 rng(5);
  for (unsigned N = 1; N <= 5; ++N) {
    const auto P = WeightFunction::power_kernel(N, 2);
    for (const auto& alpha : enumerate_leq_degree(2, 6))
      if (!alpha.is_zero()) EXPECT_EQ(subnormality_obstruction(P, alpha), N + 1);
  }
  EXPECT_EQ(subnormality_obstruction(WeightFunction::power_kernel(1, 2), MultiIndex{1, 0}), 2u);
  for (int trial = 0; trial < 30; ++trial) {
    const auto W = gen::random_weight(rng, 2, 7);
    for (const auto& alpha : enumerate_leq_degree(2, 7)) {
      if (alpha.is_zero()) continue;
      unsigned scan = 1;
      while (necessary_condition(W, scan, alpha).holds) ++scan;
      EXPECT_EQ(subnormality_obstruction(W, alpha), scan) << alpha.str();
    }
  }
}

TEST(Growth, Examples) {
  const auto g = growth_diagnostic(RadialSequence::power(2), 2, 1, 100);
  EXPECT_DOUBLE_EQ(g.min, 1.01);
  EXPECT_DOUBLE_EQ(g.max, 2.0);
  EXPECT_EQ(g.argmin, 100u);
  EXPECT_EQ(g.argmax, 1u);
  EXPECT_FALSE(g.divergent);

  const auto flat = growth_diagnostic(RadialSequence::polynomial({Rational{1}}), 1, 1, 50);
  EXPECT_EQ(flat.min, 1.0);
  EXPECT_EQ(flat.max, 1.0);
  EXPECT_FALSE(flat.divergent);

  const auto exp = growth_diagnostic(RadialSequence::geometric(Rational{2}), 2, 1, 40);
  EXPECT_GT(exp.max / exp.min, 1e6);
  EXPECT_TRUE(exp.divergent);
  EXPECT_THROW(growth_diagnostic(RadialSequence::power(2), 2, 0, 5), std::domain_error);
}
