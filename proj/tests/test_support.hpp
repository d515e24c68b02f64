#pragma once

// Shared fixtures for the test suites: the two worked 2x2 examples, random
// matrix generators, and independent oracles (closed forms, brute force,
// bisection) that never route through the code paths they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hypocert/operator_core.hpp"

namespace hypocert::testing {

// [[0, 1/2], [-1/2, 1]]: semi-dissipative, B_H = diag(0, 1), index 1.
inline OperatorMatrix ExampleOne() {
  Eigen::Matrix2d b;
  b << 0.0, 0.5, -0.5, 1.0;
  return OperatorMatrix(Eigen::MatrixXd(b));
}

// [[1, 1/2], [-1/2, 1]]: B_H = I, index 0.
inline OperatorMatrix ExampleTwo() {
  Eigen::Matrix2d b;
  b << 1.0, 0.5, -0.5, 1.0;
  return OperatorMatrix(Eigen::MatrixXd(b));
}

// [[0, 1], [-1, 0]]: skew, B_H = 0.
inline OperatorMatrix Rotation() {
  Eigen::Matrix2d b;
  b << 0.0, 1.0, -1.0, 0.0;
  return OperatorMatrix(Eigen::MatrixXd(b));
}

using Rng = std::mt19937_64;

inline ComplexMatrix RandomComplex(Eigen::Index n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = scale * Complex(normal(rng), normal(rng));
    }
  }
  return m;
}

inline ComplexMatrix RandomUnitary(Eigen::Index n, Rng& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(RandomComplex(n, rng));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

inline ComplexMatrix RandomSkew(Eigen::Index n, Rng& rng) {
  const ComplexMatrix g = RandomComplex(n, rng);
  return 0.5 * (g - g.adjoint());
}

// H + S with H = C C^* of the given rank and S skew-Hermitian, scaled to unit
// spectral norm. Rank < n gives singular B_H; such B are generically
// hypocoercive with positive index.
inline ComplexMatrix RandomSemiDissipative(Eigen::Index n, Eigen::Index rank,
                                           Rng& rng) {
  ComplexMatrix c = RandomComplex(n, rng).leftCols(rank);
  ComplexMatrix b = c * c.adjoint() + RandomSkew(n, rng);
  Eigen::JacobiSVD<ComplexMatrix> svd(b);
  return b / svd.singularValues()(0);
}

// Semi-dissipative but not hypocoercive: a skew block is split off by a
// random unitary change of basis, so B has purely imaginary eigenvalues.
inline ComplexMatrix RandomNonHypocoercive(Eigen::Index n, Rng& rng) {
  std::uniform_int_distribution<Eigen::Index> split(1, n - 1);
  const Eigen::Index k = split(rng);
  ComplexMatrix block = ComplexMatrix::Zero(n, n);
  block.topLeftCorner(n - k, n - k) =
      RandomSemiDissipative(n - k, std::max<Eigen::Index>(1, (n - k) / 2), rng);
  block.bottomRightCorner(k, k) = RandomSkew(k, rng);
  const ComplexMatrix u = RandomUnitary(n, rng);
  const ComplexMatrix b = u * block * u.adjoint();
  return b / b.jacobiSvd().singularValues()(0);
}

inline double LogUniform(double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

// ---------------------------------------------------------------- oracles

// Roots of lambda^2 - trace lambda + det for a 2x2 matrix.
inline std::vector<Complex> CharPoly2x2Roots(const ComplexMatrix& a) {
  const Complex tr = a(0, 0) + a(1, 1);
  const Complex det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  return {(tr - disc) / 2.0, (tr + disc) / 2.0};
}

// max ||A x|| over `samples` random unit vectors (a lower bound for ||A||).
inline double RandomUnitVectorNorm(const ComplexMatrix& a, int samples, Rng& rng) {
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    ComplexVector x = RandomComplex(a.cols(), rng).col(0);
    x.normalize();
    best = std::max(best, (a * x).norm());
  }
  return best;
}

// exp(A) = V exp(Lambda) V^{-1} for diagonalizable A.
inline ComplexMatrix EigenExponential(const ComplexMatrix& a) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(a);
  const ComplexMatrix& v = es.eigenvectors();
  ComplexVector expd = es.eigenvalues().array().exp();
  return v * expd.asDiagonal() * v.inverse();
}

// Scalar z -> (1 + (1 - theta) tau z) / (1 - theta tau z).
inline Complex ScalarMobius(Complex z, double theta, double tau) {
  return (1.0 + (1.0 - theta) * tau * z) / (1.0 - theta * tau * z);
}

// Direct assembly of D = (I + tau theta B)^{-1} (I - tau (1 - theta) B) by a
// column-pivoted QR solve.
inline ComplexMatrix DirectThetaOperator(const ComplexMatrix& b, double theta,
                                         double tau) {
  const Eigen::Index n = b.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  return (id + tau * theta * b).colPivHouseholderQr().solve(id - tau * (1.0 - theta) * b);
}

// Largest tau in (lo, hi) with predicate(tau) true, assuming predicate is
// true on (0, tau*] and false beyond.
inline double Bisect(const std::function<bool(double)>& inside, double lo,
                     double hi, int iterations = 200) {
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (inside(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Multiset distance: greedy matching of two complex lists.
inline double MultisetDistance(std::vector<Complex> a, std::vector<Complex> b) {
  double worst = 0.0;
  for (const Complex& z : a) {
    auto best = std::min_element(b.begin(), b.end(), [&](Complex x, Complex y) {
      return std::abs(x - z) < std::abs(y - z);
    });
    worst = std::max(worst, std::abs(*best - z));
    b.erase(best);
  }
  return worst;
}

}  // namespace hypocert::testing
