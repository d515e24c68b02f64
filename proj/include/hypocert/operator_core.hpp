#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hypocert/error.hpp"

namespace hypocert {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Matrices larger than this are rejected; the analyses here are meant for
// small dense operators.
inline constexpr std::ptrdiff_t kMaxDimension = 512;

// Immutable dense complex square matrix standing for a generator B, a
// generator A = -B, or an iteration operator D. Construction validates that
// the matrix is square, nonempty, at most kMaxDimension, and finite.
class OperatorMatrix {
 public:
  explicit OperatorMatrix(ComplexMatrix entries);
  explicit OperatorMatrix(const Eigen::MatrixXd& real_entries);

  static OperatorMatrix Identity(std::ptrdiff_t dim);
  static OperatorMatrix Zero(std::ptrdiff_t dim);

  std::ptrdiff_t dim() const { return entries_.rows(); }
  const ComplexMatrix& matrix() const { return entries_; }
  Complex operator()(std::ptrdiff_t row, std::ptrdiff_t col) const {
    return entries_(row, col);
  }

  OperatorMatrix Adjoint() const;
  bool IsReal() const;

 private:
  ComplexMatrix entries_;
};

enum class HermitianClass { kCoercive, kPositiveSemidefinite, kIndefinite };

const char* HermitianClassName(HermitianClass c);

// Outcome of a "H >= kappa I" / "H >= 0" query. The matrix stored is the
// symmetrized input (H + H^*)/2.
struct HermitianCertificate {
  ComplexMatrix matrix;
  double min_eigenvalue = 0.0;
  HermitianClass classification = HermitianClass::kIndefinite;
  double tolerance_used = 0.0;
  // Set when min_eigenvalue lies within 10 * tolerance_used of zero.
  bool marginal = false;

  bool IsPositiveSemidefinite() const {
    return classification != HermitianClass::kIndefinite;
  }
  bool IsCoercive() const {
    return classification == HermitianClass::kCoercive;
  }
};

// (A + A^*)/2, exactly Hermitian.
ComplexMatrix HermitianPart(const ComplexMatrix& a);
OperatorMatrix HermitianPart(const OperatorMatrix& a);

// All eigenvalues with algebraic multiplicity, sorted by (real, imag).
std::vector<Complex> Spectrum(const ComplexMatrix& a);
std::vector<Complex> Spectrum(const OperatorMatrix& a);

double SpectralRadius(const ComplexMatrix& a);

// Largest singular value.
double SpectralNorm(const ComplexMatrix& a);
double SpectralNorm(const OperatorMatrix& a);

// Closed-form largest singular value of a real 2x2 matrix [[a, b], [c, d]]:
// sqrt((g + sqrt(g^2 - 4h)) / 2), g = a^2 + b^2 + c^2 + d^2, h = (ad - bc)^2.
struct TwoByTwoNormTerms {
  double g = 0.0;
  double h = 0.0;
  double discriminant = 0.0;  // g^2 - 4h
  double norm = 0.0;
};
TwoByTwoNormTerms SpectralNorm2x2(double a, double b, double c, double d);

// max(dim, 4) * machine epsilon * ||H||.
double DefaultHermitianTolerance(const ComplexMatrix& h);

// Eigenvalues of the Hermitian matrix (H + H^*)/2 in ascending order.
Eigen::VectorXd HermitianEigenvalues(const ComplexMatrix& h);

// Classifies (H + H^*)/2. When `tolerance` is empty the default tolerance is
// used. Throws kNotHermitian if H deviates from H^* by more than the
// tolerance (with a floor of the default tolerance).
HermitianCertificate ClassifyHermitian(
    const ComplexMatrix& h, std::optional<double> tolerance = std::nullopt);

// exp(A) by scaling and squaring with Pade approximation.
ComplexMatrix MatrixExponential(const ComplexMatrix& a);
OperatorMatrix MatrixExponential(const OperatorMatrix& a);

struct InvertOptions {
  // Admissible ||A * A^{-1} - I|| (spectral norm).
  double residual_tolerance = 1e-8;
};

// Throws kNotInvertible when A is singular to working precision or the
// residual check fails.
ComplexMatrix Invert(const ComplexMatrix& a, const InvertOptions& options = {});
OperatorMatrix Invert(const OperatorMatrix& a,
                      const InvertOptions& options = {});

}  // namespace hypocert
