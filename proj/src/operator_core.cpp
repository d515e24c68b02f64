#include "hypocert/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace hypocert {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

void RequireSquare(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a nonempty square matrix, got " << a.rows()
       << "x" << a.cols();
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
}

}  // namespace

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kNotHermitian: return "not_hermitian";
    case ErrorCode::kNotInvertible: return "not_invertible";
    case ErrorCode::kSchemeInapplicable: return "scheme_inapplicable";
    case ErrorCode::kPrecondition: return "precondition_violated";
    case ErrorCode::kNoDecay: return "no_decay_detected";
    case ErrorCode::kNumerical: return "numerical_failure";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

OperatorMatrix::OperatorMatrix(ComplexMatrix entries)
    : entries_(std::move(entries)) {
  RequireSquare(entries_, "OperatorMatrix");
  if (entries_.rows() > kMaxDimension) {
    std::ostringstream os;
    os << "OperatorMatrix: dimension " << entries_.rows()
       << " exceeds the supported maximum " << kMaxDimension;
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
      const Complex z = entries_(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        std::ostringstream os;
        os << "OperatorMatrix: non-finite entry at (" << i << ", " << j << ")";
        throw Error(ErrorCode::kInvalidArgument, os.str());
      }
    }
  }
}

OperatorMatrix::OperatorMatrix(const Eigen::MatrixXd& real_entries)
    : OperatorMatrix(ComplexMatrix(real_entries.cast<Complex>())) {}

OperatorMatrix OperatorMatrix::Identity(std::ptrdiff_t dim) {
  return OperatorMatrix(ComplexMatrix(ComplexMatrix::Identity(dim, dim)));
}

OperatorMatrix OperatorMatrix::Zero(std::ptrdiff_t dim) {
  return OperatorMatrix(ComplexMatrix(ComplexMatrix::Zero(dim, dim)));
}

OperatorMatrix OperatorMatrix::Adjoint() const {
  return OperatorMatrix(ComplexMatrix(entries_.adjoint()));
}

bool OperatorMatrix::IsReal() const {
  return entries_.imag().isZero(0.0);
}

const char* HermitianClassName(HermitianClass c) {
  switch (c) {
    case HermitianClass::kCoercive: return "coercive";
    case HermitianClass::kPositiveSemidefinite: return "positive-semidefinite";
    case HermitianClass::kIndefinite: return "indefinite";
  }
  return "unknown";
}

ComplexMatrix HermitianPart(const ComplexMatrix& a) {
  RequireSquare(a, "HermitianPart");
  ComplexMatrix h = 0.5 * (a + a.adjoint());
  // Force exact Hermitian symmetry and a real diagonal.
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    h(j, j) = Complex(h(j, j).real(), 0.0);
    for (Eigen::Index i = j + 1; i < h.rows(); ++i) {
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

OperatorMatrix HermitianPart(const OperatorMatrix& a) {
  return OperatorMatrix(HermitianPart(a.matrix()));
}

std::vector<Complex> Spectrum(const ComplexMatrix& a) {
  RequireSquare(a, "Spectrum");
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumerical, "Spectrum: eigenvalue solver did not converge");
  }
  std::vector<Complex> values(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + a.rows());
  std::sort(values.begin(), values.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return values;
}

std::vector<Complex> Spectrum(const OperatorMatrix& a) {
  return Spectrum(a.matrix());
}

double SpectralRadius(const ComplexMatrix& a) {
  double radius = 0.0;
  for (const Complex& z : Spectrum(a)) radius = std::max(radius, std::abs(z));
  return radius;
}

double SpectralNorm(const ComplexMatrix& a) {
  RequireSquare(a, "SpectralNorm");
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

double SpectralNorm(const OperatorMatrix& a) { return SpectralNorm(a.matrix()); }

TwoByTwoNormTerms SpectralNorm2x2(double a, double b, double c, double d) {
  TwoByTwoNormTerms t;
  t.g = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  t.h = det * det;
  // g^2 - 4h factored to avoid cancellation when the singular values are close.
  t.discriminant = ((a - d) * (a - d) + (b + c) * (b + c)) *
                   ((a + d) * (a + d) + (b - c) * (b - c));
  t.norm = std::sqrt((t.g + std::sqrt(std::max(t.discriminant, 0.0))) / 2.0);
  return t;
}

double DefaultHermitianTolerance(const ComplexMatrix& h) {
  const double dim = static_cast<double>(std::max<Eigen::Index>(h.rows(), 4));
  return dim * kEpsilon * SpectralNorm(h);
}

Eigen::VectorXd HermitianEigenvalues(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(HermitianPart(h),
                                                      Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumerical,
                "HermitianEigenvalues: eigenvalue solver did not converge");
  }
  return solver.eigenvalues();
}

HermitianCertificate ClassifyHermitian(const ComplexMatrix& h,
                                       std::optional<double> tolerance) {
  RequireSquare(h, "ClassifyHermitian");
  HermitianCertificate cert;
  cert.matrix = HermitianPart(h);
  const double default_tol = DefaultHermitianTolerance(cert.matrix);
  cert.tolerance_used = tolerance.value_or(default_tol);
  if (!(cert.tolerance_used >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "ClassifyHermitian: tolerance must be nonnegative");
  }
  const double asymmetry = SpectralNorm(ComplexMatrix(h - h.adjoint())) / 2.0;
  if (asymmetry > std::max(cert.tolerance_used, default_tol)) {
    std::ostringstream os;
    os << "ClassifyHermitian: matrix is not Hermitian (||H - H^*||/2 = "
       << asymmetry << ")";
    throw Error(ErrorCode::kNotHermitian, os.str());
  }
  cert.min_eigenvalue = HermitianEigenvalues(cert.matrix)(0);
  if (cert.min_eigenvalue > cert.tolerance_used) {
    cert.classification = HermitianClass::kCoercive;
  } else if (cert.min_eigenvalue >= -cert.tolerance_used) {
    cert.classification = HermitianClass::kPositiveSemidefinite;
  } else {
    cert.classification = HermitianClass::kIndefinite;
  }
  cert.marginal = std::abs(cert.min_eigenvalue) <= 10.0 * cert.tolerance_used;
  return cert;
}

ComplexMatrix MatrixExponential(const ComplexMatrix& a) {
  RequireSquare(a, "MatrixExponential");
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  // exp overflows beyond ~709; anything this large is far outside the
  // intended regime.
  if (norm > 700.0) {
    std::ostringstream os;
    os << "MatrixExponential: ||A||_inf = " << norm << " is too large";
    throw Error(ErrorCode::kNumerical, os.str());
  }
  ComplexMatrix result = a.exp();
  if (!result.allFinite()) {
    throw Error(ErrorCode::kNumerical, "MatrixExponential: overflow");
  }
  return result;
}

OperatorMatrix MatrixExponential(const OperatorMatrix& a) {
  return OperatorMatrix(MatrixExponential(a.matrix()));
}

ComplexMatrix Invert(const ComplexMatrix& a, const InvertOptions& options) {
  RequireSquare(a, "Invert");
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& sv = svd.singularValues();
  const double largest = sv(0);
  const double smallest = sv(sv.size() - 1);
  const double dim = static_cast<double>(std::max<Eigen::Index>(a.rows(), 4));
  if (!(smallest > dim * kEpsilon * largest)) {
    std::ostringstream os;
    os << "Invert: matrix is singular to working precision (sigma_min = "
       << smallest << ", sigma_max = " << largest << ")";
    throw Error(ErrorCode::kNotInvertible, os.str());
  }
  ComplexMatrix inverse = a.partialPivLu().inverse();
  const ComplexMatrix residual =
      a * inverse - ComplexMatrix::Identity(a.rows(), a.cols());
  const double residual_norm = SpectralNorm(residual);
  if (!(residual_norm <= options.residual_tolerance)) {
    std::ostringstream os;
    os << "Invert: residual ||A A^{-1} - I|| = " << residual_norm
       << " exceeds " << options.residual_tolerance;
    throw Error(ErrorCode::kNotInvertible, os.str());
  }
  return inverse;
}

OperatorMatrix Invert(const OperatorMatrix& a, const InvertOptions& options) {
  return OperatorMatrix(Invert(a.matrix(), options));
}

}  // namespace hypocert
