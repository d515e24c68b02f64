#include "hypocert/coercivity.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace hypocert {
namespace {

using testing::ExampleOne;
using testing::ExampleTwo;
using testing::Rotation;

TEST(IsSemiDissipative, Examples) {
  const auto ex1 = IsSemiDissipative(ExampleOne());
  EXPECT_TRUE(ex1.semi_dissipative);
  EXPECT_EQ(ex1.certificate.min_eigenvalue, 0.0);

  const auto neg = IsSemiDissipative(OperatorMatrix(ComplexMatrix(-ComplexMatrix::Identity(2, 2))));
  EXPECT_FALSE(neg.semi_dissipative);
  EXPECT_DOUBLE_EQ(neg.certificate.min_eigenvalue, -1.0);

  EXPECT_TRUE(IsSemiDissipative(OperatorMatrix::Zero(3)).semi_dissipative);
}

TEST(IsHypocoercive, Examples) {
  const auto ex1 = IsHypocoercive(ExampleOne());
  EXPECT_TRUE(ex1.hypocoercive);
  EXPECT_NEAR(ex1.min_real_part, 0.5, 1e-7);  // defective double eigenvalue

  const auto zero = IsHypocoercive(OperatorMatrix::Zero(2));
  EXPECT_FALSE(zero.hypocoercive);
  EXPECT_EQ(zero.min_real_part, 0.0);

  const auto rot = IsHypocoercive(Rotation());
  EXPECT_FALSE(rot.hypocoercive);
  EXPECT_NEAR(rot.min_real_part, 0.0, 1e-15);
  EXPECT_TRUE(rot.marginal);
}

TEST(SpectralAbscissaDecayRate, Examples) {
  EXPECT_NEAR(SpectralAbscissaDecayRate(ExampleOne()), 0.5, 1e-7);
  EXPECT_DOUBLE_EQ(SpectralAbscissaDecayRate(OperatorMatrix::Identity(3)), 1.0);
  EXPECT_NEAR(SpectralAbscissaDecayRate(Rotation()), 0.0, 1e-15);
}

TEST(HcIndex, ExampleOneHasIndexOne) {
  const IndexResult r = HcIndex(ExampleOne());
  ASSERT_TRUE(r.index.has_value());
  EXPECT_EQ(*r.index, 1);
  EXPECT_EQ(r.search_cap, 1);
  ASSERT_EQ(r.partial_min_eigenvalues.size(), 2u);
  EXPECT_LE(r.partial_min_eigenvalues[0], r.tolerance_used);
  // B_H + B^* B_H B = [[1/4, -1/2], [-1/2, 2]].
  Eigen::Matrix2cd expected;
  expected << 0.25, -0.5, -0.5, 2.0;
  EXPECT_LT((r.final_partial_sum - ComplexMatrix(expected)).cwiseAbs().maxCoeff(), 1e-12);
  // lambda_min = (9/4 - sqrt(49/16 - 4 * (1/2 - 1/4))) / 2
  const double kappa = (2.25 - std::sqrt(2.25 * 2.25 - 4.0 * 0.25)) / 2.0;
  EXPECT_NEAR(r.witness_kappa, kappa, 1e-14);
  EXPECT_EQ(r.witness_kappa, r.partial_min_eigenvalues[1]);
}

TEST(HcIndex, ExampleTwoHasIndexZero) {
  const IndexResult r = HcIndex(ExampleTwo());
  ASSERT_TRUE(r.index.has_value());
  EXPECT_EQ(*r.index, 0);
  EXPECT_DOUBLE_EQ(r.witness_kappa, 1.0);
}

TEST(HcIndex, SkewHasNoIndex) {
  const IndexResult r = HcIndex(Rotation());
  EXPECT_FALSE(r.index.has_value());
  EXPECT_EQ(r.partial_min_eigenvalues, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(r.search_cap, 1);
  // A larger cap does not change the outcome.
  EXPECT_FALSE(HcIndex(Rotation(), std::nullopt, 10).index.has_value());
}

TEST(HcIndex, RequiresSemiDissipativity) {
  try {
    HcIndex(OperatorMatrix(ComplexMatrix(-ComplexMatrix::Identity(2, 2))));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
}

TEST(HcIndex, ZeroCapOnlyChecksHermitianPart) {
  const IndexResult r = HcIndex(ExampleOne(), std::nullopt, 0);
  EXPECT_FALSE(r.index.has_value());
  EXPECT_EQ(r.search_cap, 0);
}

// A chain of n oscillators damped only at the last site has index n - 1.
TEST(HcIndex, DampedChainIndexGrowsWithLength) {
  for (int n = 2; n <= 6; ++n) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
      b(i, i + 1) = 1.0;
      b(i + 1, i) = -1.0;
    }
    b(n - 1, n - 1) = 1.0;
    const IndexResult r = HcIndex(OperatorMatrix(b));
    ASSERT_TRUE(r.index.has_value()) << "n = " << n;
    EXPECT_EQ(*r.index, n - 1);
  }
}

TEST(CoercivityBounds, Examples) {
  const auto ex2 = ComputeCoercivityBounds(ExampleTwo());
  EXPECT_NEAR(ex2.mu, 1.25, 1e-14);
  EXPECT_NEAR(ex2.lambda_upper, 1.25, 1e-14);

  const auto id = ComputeCoercivityBounds(OperatorMatrix::Identity(3));
  EXPECT_DOUBLE_EQ(id.mu, 1.0);
  EXPECT_DOUBLE_EQ(id.lambda_upper, 1.0);

  // B^*B = [[1/4, -1/2], [-1/2, 5/4]]: trace 3/2, determinant 1/16.
  const auto ex1 = ComputeCoercivityBounds(ExampleOne());
  EXPECT_NEAR(ex1.mu, (1.5 - std::sqrt(2.0)) / 2.0, 1e-14);
  EXPECT_NEAR(ex1.lambda_upper, (1.5 + std::sqrt(2.0)) / 2.0, 1e-14);
}

TEST(CoercivityBounds, SingularIsRejected) {
  try {
    ComputeCoercivityBounds(OperatorMatrix::Zero(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotInvertible);
  }
}

TEST(CoercivityBounds, MuDominatesInverseNormBound) {
  testing::Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix b = testing::RandomComplex(1 + trial % 6, rng);
    const auto bounds = ComputeCoercivityBounds(OperatorMatrix(b));
    const double inv_norm = SpectralNorm(ComplexMatrix(b.inverse()));
    EXPECT_GE(bounds.mu, 1.0 / (inv_norm * inv_norm) - 1e-10);
    EXPECT_GE(bounds.lambda_upper, bounds.mu);
  }
}

// ------------------------------------------------------------- properties

TEST(HcIndexProperty, PartialMinimaAreNondecreasing) {
  testing::Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const ComplexMatrix b =
        trial % 4 == 0 ? testing::RandomNonHypocoercive(n, rng)
                       : testing::RandomSemiDissipative(n, 1 + trial % n, rng);
    const IndexResult r = HcIndex(OperatorMatrix(b), 1e-10, 2 * static_cast<int>(n));
    for (std::size_t j = 1; j < r.partial_min_eigenvalues.size(); ++j) {
      EXPECT_GE(r.partial_min_eigenvalues[j],
                r.partial_min_eigenvalues[j - 1] - 1e-12);
    }
  }
}

TEST(HcIndexProperty, IndexZeroIffHermitianPartCoercive) {
  testing::Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const ComplexMatrix b = testing::RandomSemiDissipative(n, 1 + trial % n, rng);
    const IndexResult r = HcIndex(OperatorMatrix(b));
    const bool coercive = ClassifyHermitian(HermitianPart(b)).IsCoercive();
    EXPECT_EQ(r.index.has_value() && *r.index == 0, coercive);
  }
}

TEST(HcIndexProperty, FiniteIndexIffHypocoercive) {
  testing::Rng rng(24);
  int hypocoercive = 0, not_hypocoercive = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const ComplexMatrix b = trial % 3 == 0
                                ? testing::RandomNonHypocoercive(n, rng)
                                : testing::RandomSemiDissipative(n, 1 + trial % (n - 1), rng);
    const OperatorMatrix op(b);
    const auto hc = IsHypocoercive(op);
    const IndexResult r = HcIndex(op, 1e-10);
    // Near-degenerate draws: weak decay or a barely coercive partial sum.
    if (hc.hypocoercive && hc.min_real_part < 1e-6) continue;
    bool near = false;
    for (double m : r.partial_min_eigenvalues) near = near || (m > 1e-10 && m < 1e-7);
    if (near) continue;
    EXPECT_EQ(r.index.has_value(), hc.hypocoercive) << "trial " << trial;
    (hc.hypocoercive ? hypocoercive : not_hypocoercive)++;
  }
  EXPECT_GT(hypocoercive, 100);
  EXPECT_GT(not_hypocoercive, 50);
}

TEST(HcIndexProperty, InvariantUnderUnitaryConjugation) {
  testing::Rng rng(25);
  int compared = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const ComplexMatrix b = testing::RandomSemiDissipative(n, 1 + trial % (n - 1), rng);
    const ComplexMatrix u = testing::RandomUnitary(n, rng);
    const IndexResult r1 = HcIndex(OperatorMatrix(b), 1e-10);
    const IndexResult r2 = HcIndex(OperatorMatrix(ComplexMatrix(u.adjoint() * b * u)), 1e-10);
    bool near = false;
    for (const auto* r : {&r1, &r2}) {
      for (double m : r->partial_min_eigenvalues) {
        near = near || (std::abs(m) > 1e-10 && std::abs(m) < 1e-7);
      }
    }
    if (near) continue;
    ++compared;
    EXPECT_EQ(r1.index, r2.index);
    if (r1.index && r2.index) {
      EXPECT_NEAR(r1.witness_kappa, r2.witness_kappa, 1e-8);
    }
  }
  EXPECT_GT(compared, 100);
}

}  // namespace
}  // namespace hypocert
