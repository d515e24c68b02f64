#include "hypocert/decay.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "hypocert/coercivity.hpp"
#include "test_support.hpp"

namespace hypocert {
namespace {

using testing::ExampleOne;
using testing::ExampleTwo;
using testing::Rotation;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

TEST(LogSpace, EndpointsAndRatio) {
  const auto g = LogSpace(1e-4, 1e-2, 50);
  ASSERT_EQ(g.size(), 50u);
  EXPECT_DOUBLE_EQ(g.front(), 1e-4);
  EXPECT_DOUBLE_EQ(g.back(), 1e-2);
  for (std::size_t i = 1; i < g.size(); ++i) {
    EXPECT_NEAR(g[i] / g[i - 1], std::pow(100.0, 1.0 / 49.0), 1e-12);
  }
  EXPECT_EQ(CodeOf([] { LogSpace(1.0, 2.0, 1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { LogSpace(0.0, 2.0, 5); }), ErrorCode::kInvalidArgument);
}

TEST(PropagatorNormCurve, Examples) {
  const auto id = PropagatorNormCurve(OperatorMatrix::Identity(3), {1.0});
  EXPECT_NEAR(id.values[0], std::exp(-1.0), 1e-15);
  EXPECT_EQ(id.kind, CurveKind::kContinuous);

  const auto rot = PropagatorNormCurve(Rotation(), LogSpace(1e-3, 1e2, 20));
  for (double v : rot.values) EXPECT_NEAR(v, 1.0, 1e-13);

  const auto one = PropagatorNormCurve(ExampleOne(), LogSpace(1e-4, 1e-1, 30));
  for (double v : one.values) EXPECT_LT(v, 1.0);
  for (std::size_t i = 1; i < one.values.size(); ++i) {
    EXPECT_LE(one.values[i], one.values[i - 1]);
  }
  EXPECT_EQ(CodeOf([] { PropagatorNormCurve(ExampleOne(), {0.2, 0.1}); }),
            ErrorCode::kInvalidArgument);
}

TEST(PropagatorNormCurve, Submultiplicative) {
  testing::Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + trial % 6;
    const OperatorMatrix b(testing::RandomComplex(n, rng, 0.5));
    const double s = testing::LogUniform(1e-3, 2.0, rng);
    const double t = testing::LogUniform(1e-3, 2.0, rng);
    const auto single = PropagatorNormCurve(b, {std::min(s, t), std::max(s, t) + 1e-12});
    const auto sum = PropagatorNormCurve(b, {s + t});
    EXPECT_LE(sum.values[0], single.values[0] * single.values[1] * (1.0 + 1e-10) + 1e-10);
  }
}

TEST(PropagatorNormCurve, SemiDissipativeBound) {
  testing::Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + trial % 6;
    const OperatorMatrix b(testing::RandomSemiDissipative(n, 1 + trial % n, rng));
    for (double v : PropagatorNormCurve(b, LogSpace(1e-4, 10.0, 40)).values) {
      EXPECT_LE(v, 1.0 + 1e-10);
    }
  }
}

TEST(FitShortTimeExponent, IndexOneExample) {
  const DecayFit fit = FitShortTimeExponent(ExampleOne());
  EXPECT_NEAR(fit.a_hat, 3.0, 0.1);
  EXPECT_GT(fit.c_hat, 0.0);
  EXPECT_GT(fit.r_squared, 0.999);
  EXPECT_EQ(fit.points, 50);
  EXPECT_EQ(fit.fit_window, std::make_pair(1e-4, 1e-2));
}

TEST(FitShortTimeExponent, IndexZeroExample) {
  EXPECT_NEAR(FitShortTimeExponent(ExampleTwo()).a_hat, 1.0, 0.05);
}

TEST(FitShortTimeExponent, ScalarDecay) {
  const DecayFit fit = FitShortTimeExponent(OperatorMatrix::Identity(2));
  EXPECT_NEAR(fit.a_hat, 1.0, 0.02);
  EXPECT_NEAR(fit.c_hat, 1.0, 0.02);
}

TEST(FitShortTimeExponent, ExponentTracksIndex) {
  // Damped chain: skew nearest-neighbour coupling, damping on the last site.
  for (Eigen::Index n = 2; n <= 3; ++n) {
    ComplexMatrix b = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      b(i, i + 1) = 1.0;
      b(i + 1, i) = -1.0;
    }
    b(n - 1, n - 1) = 1.0;
    const OperatorMatrix op(b);
    const int m = *HcIndex(op).index;
    EXPECT_EQ(m, n - 1);
    const DecayFit fit = FitShortTimeExponent(op, 1e-2, 1e-1, 50);
    EXPECT_NEAR(fit.a_hat, 2 * m + 1, 0.1) << "n = " << n;
  }
}

TEST(FitShortTimeExponent, UnitaryFlowHasNoDecay) {
  EXPECT_EQ(CodeOf([] { FitShortTimeExponent(Rotation()); }), ErrorCode::kNoDecay);
}

TEST(FitShortTimeExponent, GrowthIsRejected) {
  const OperatorMatrix b(ComplexMatrix(-ComplexMatrix::Identity(2, 2)));
  EXPECT_EQ(CodeOf([&] { FitShortTimeExponent(b); }), ErrorCode::kPrecondition);
}

TEST(FitShortTimeExponent, WindowHalvingIsStable) {
  for (const OperatorMatrix& b : {ExampleOne(), ExampleTwo()}) {
    const double full = FitShortTimeExponent(b, 1e-4, 1e-2, 50).a_hat;
    const double lower = FitShortTimeExponent(b, 1e-4, 1e-3, 50).a_hat;
    const double upper = FitShortTimeExponent(b, 1e-3, 1e-2, 50).a_hat;
    EXPECT_LT(std::abs(full - lower), 0.05);
    EXPECT_LT(std::abs(full - upper), 0.05);
  }
}

TEST(FitShortTimeExponent, ExplicitWindowSelectsSamples) {
  const NormCurve curve = PropagatorNormCurve(ExampleTwo(), LogSpace(1e-5, 1.0, 100));
  const DecayFit fit = FitShortTimeExponent(curve, std::make_pair(1e-4, 1e-2));
  EXPECT_EQ(fit.points, 40);
  EXPECT_NEAR(fit.a_hat, 1.0, 0.05);
}

TEST(DiscreteNormSequence, Examples) {
  const auto mid = DiscreteNormSequence(ExampleOne(), ThetaScheme(0.5, 1.0), 10);
  ASSERT_EQ(mid.values.size(), 11u);
  EXPECT_EQ(mid.kind, CurveKind::kDiscrete);
  EXPECT_EQ(mid.values[0], 1.0);
  EXPECT_NEAR(mid.values[1], 1.0, 1e-9);
  EXPECT_LT(mid.values[2], 1.0 - 1e-9);

  const auto impl = DiscreteNormSequence(ExampleOne(), ThetaScheme(1.0, 1.0), 3);
  EXPECT_LT(impl.values[1], 1.0);

  const auto zero = DiscreteNormSequence(OperatorMatrix::Zero(2), ThetaScheme(0.5, 1.0), 5);
  for (double v : zero.values) EXPECT_EQ(v, 1.0);
  for (std::size_t k = 0; k < zero.abscissae.size(); ++k) EXPECT_EQ(zero.abscissae[k], k);
}

TEST(DiscreteNormSequence, LongSequenceMatchesDirectPowers) {
  const ComplexMatrix d = testing::DirectThetaOperator(ExampleOne().matrix(), 0.5, 1.0);
  const auto curve = DiscreteNormSequence(OperatorMatrix(d), 40);
  ComplexMatrix power = ComplexMatrix::Identity(2, 2);
  for (int k = 1; k <= 40; ++k) {
    power = power * d;
    Eigen::JacobiSVD<ComplexMatrix> svd(power);
    EXPECT_NEAR(curve.values[k], svd.singularValues()(0), 1e-12) << "k = " << k;
  }
}

TEST(DiscreteNormSequence, PlateauIsExactAndNonincreasing) {
  testing::Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const OperatorMatrix b(testing::RandomSemiDissipative(n, 1 + trial % (n - 1), rng));
    const auto curve = DiscreteNormSequence(
        b, ThetaScheme(0.5, testing::LogUniform(1e-2, 1e1, rng)), 40);
    for (std::size_t j = 1; j < curve.values.size(); ++j) {
      EXPECT_LE(curve.values[j], 1.0 + 1e-10);
      EXPECT_LE(curve.values[j], curve.values[j - 1] * (1.0 + 1e-12));
    }
  }
}

TEST(FirstContractionIndex, Examples) {
  const auto mid = DiscreteNormSequence(ExampleOne(), ThetaScheme(0.5, 1.0), 10);
  EXPECT_EQ(FirstContractionIndex(mid, 1e-9), 2);
  EXPECT_EQ(FirstContractionIndex(mid, 1e-9, 1), 2);
  EXPECT_EQ(CodeOf([&] { FirstContractionIndex(mid, 1e-9, 0); }), ErrorCode::kNumerical);

  const auto impl = DiscreteNormSequence(ExampleOne(), ThetaScheme(1.0, 1.0), 10);
  EXPECT_EQ(FirstContractionIndex(impl, 1e-9), 1);

  const auto zero = DiscreteNormSequence(OperatorMatrix::Zero(2), ThetaScheme(0.5, 1.0), 10);
  EXPECT_EQ(FirstContractionIndex(zero, 1e-9), std::nullopt);

  NormCurve continuous;
  continuous.abscissae = {1.0};
  continuous.values = {0.5};
  EXPECT_EQ(CodeOf([&] { FirstContractionIndex(continuous, 1e-9); }),
            ErrorCode::kInvalidArgument);
}

TEST(FirstContractionIndex, EqualsDhcIndexPlusOne) {
  testing::Rng rng(44);
  int checked = 0;
  for (int trial = 0; checked < 100 && trial < 1000; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const OperatorMatrix b(testing::RandomSemiDissipative(n, 1 + trial % (n - 1), rng));
    const ThetaScheme s(0.5, testing::LogUniform(0.3, 3.0, rng));
    const IndexResult r = DhcIndex(b, s, 1e-10);
    if (!r.index || r.marginal || r.witness_kappa < 1e-6) continue;
    const auto curve = DiscreteNormSequence(b, s, *r.index + 3);
    bool near = false;
    for (double v : curve.values) near = near || (v < 1.0 - 1e-10 && v > 1.0 - 1e-7);
    if (near) continue;
    EXPECT_EQ(FirstContractionIndex(curve, 1e-9), *r.index + 1);
    ++checked;
  }
  EXPECT_EQ(checked, 100);
}

TEST(EvolveContinuous, Examples) {
  ComplexVector e1 = ComplexVector::Zero(2);
  e1(0) = 1.0;
  const auto id = EvolveContinuous(OperatorMatrix::Identity(2), e1, {0.0, 1.0});
  EXPECT_EQ(id.states[0], e1);
  EXPECT_LT((id.states[1] - std::exp(-1.0) * e1).norm(), 1e-15);

  const std::vector<double> grid = LogSpace(1e-3, 20.0, 400);
  const auto traj = EvolveContinuous(ExampleOne(), e1, grid);
  double previous = 1.0;
  for (const ComplexVector& x : traj.states) {
    EXPECT_LE(x.norm(), previous + 1e-14);
    previous = x.norm();
  }
  EXPECT_EQ(CodeOf([&] { EvolveContinuous(ExampleOne(), ComplexVector::Zero(3), grid); }),
            ErrorCode::kInvalidArgument);
}

TEST(EvolveDiscrete, Examples) {
  ComplexVector e1 = ComplexVector::Zero(2);
  e1(0) = 1.0;
  const auto still = EvolveDiscrete(OperatorMatrix::Zero(2), ThetaScheme(0.3, 2.0), e1, 5);
  ASSERT_EQ(still.states.size(), 6u);
  for (const ComplexVector& x : still.states) EXPECT_EQ(x, e1);

  for (double tau : {1e-3, 1e-2, 0.1, 1.0, 10.0}) {
    const auto expl = EvolveDiscrete(ExampleOne(), ThetaScheme(0.0, tau), e1, 1);
    EXPECT_NEAR(expl.states[1].norm(), std::sqrt(1.0 + tau * tau / 4.0), 1e-14);
  }

  testing::Rng rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexVector x0 = testing::RandomComplex(2, rng).col(0);
    x0.normalize();
    const auto impl = EvolveDiscrete(ExampleTwo(), ThetaScheme(1.0, 1.0), x0, 1);
    EXPECT_LE(impl.states[1].norm(), 1.0 / std::sqrt(4.25) + 1e-15);
  }

  const OperatorMatrix minus_identity(ComplexMatrix(-ComplexMatrix::Identity(2, 2)));
  EXPECT_EQ(CodeOf([&] { EvolveDiscrete(minus_identity, ThetaScheme(1.0, 1.0), e1, 2); }),
            ErrorCode::kSchemeInapplicable);
}

}  // namespace
}  // namespace hypocert
