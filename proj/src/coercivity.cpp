#include "hypocert/coercivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hypocert {

namespace {
constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
}  // namespace

double DefaultSpectralTolerance(const ComplexMatrix& a) {
  return std::sqrt(kEpsilon) * std::max(1.0, SpectralNorm(a));
}

SemiDissipativity IsSemiDissipative(const OperatorMatrix& b,
                                    std::optional<double> tolerance) {
  SemiDissipativity result;
  result.certificate = ClassifyHermitian(HermitianPart(b.matrix()), tolerance);
  result.semi_dissipative = result.certificate.IsPositiveSemidefinite();
  return result;
}

HypocoercivityCheck IsHypocoercive(const OperatorMatrix& b,
                                   std::optional<double> tolerance) {
  HypocoercivityCheck check;
  check.tolerance_used =
      tolerance.value_or(DefaultSpectralTolerance(b.matrix()));
  check.min_real_part = SpectralAbscissaDecayRate(b);
  check.hypocoercive = check.min_real_part > check.tolerance_used;
  check.marginal =
      std::abs(check.min_real_part) <= 10.0 * check.tolerance_used;
  return check;
}

double SpectralAbscissaDecayRate(const OperatorMatrix& b) {
  const auto spectrum = Spectrum(b);
  double rate = std::numeric_limits<double>::infinity();
  for (const Complex& z : spectrum) rate = std::min(rate, z.real());
  return rate;
}

IndexResult SearchCoercivityIndex(const ComplexMatrix& propagator,
                                  const ComplexMatrix& base_term,
                                  std::optional<double> tolerance, int cap) {
  if (cap < 0) {
    throw Error(ErrorCode::kInvalidArgument, "index search cap must be >= 0");
  }
  IndexResult result;
  result.search_cap = cap;
  const Eigen::Index n = propagator.rows();
  ComplexMatrix power = ComplexMatrix::Identity(n, n);
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (int j = 0; j <= cap; ++j) {
    if (j > 0) power = (power * propagator).eval();
    const ComplexMatrix term = power.adjoint() * base_term * power;
    sum += (term + term.adjoint()) / 2.0;
    const HermitianCertificate cert = ClassifyHermitian(sum, tolerance);
    result.partial_min_eigenvalues.push_back(cert.min_eigenvalue);
    result.final_partial_sum = cert.matrix;
    result.tolerance_used = cert.tolerance_used;
    result.marginal = cert.marginal;
    if (cert.IsCoercive()) {
      result.index = j;
      result.witness_kappa = cert.min_eigenvalue;
      break;
    }
  }
  return result;
}

IndexResult HcIndex(const OperatorMatrix& b, std::optional<double> tolerance,
                    std::optional<int> cap) {
  const SemiDissipativity sd = IsSemiDissipative(b, tolerance);
  if (!sd.semi_dissipative) {
    std::ostringstream os;
    os << "HcIndex: B is not semi-dissipative (lambda_min(B_H) = "
       << sd.certificate.min_eigenvalue << ")";
    throw Error(ErrorCode::kPrecondition, os.str());
  }
  const int search_cap = cap.value_or(static_cast<int>(b.dim()) - 1);
  return SearchCoercivityIndex(b.matrix(), sd.certificate.matrix, tolerance,
                               search_cap);
}

CoercivityBounds ComputeCoercivityBounds(const OperatorMatrix& b) {
  const ComplexMatrix inverse = Invert(b.matrix());
  const ComplexMatrix gram = b.matrix().adjoint() * b.matrix();
  const Eigen::VectorXd eig = HermitianEigenvalues(gram);
  CoercivityBounds bounds;
  bounds.mu = eig(0);
  bounds.lambda_upper = eig(eig.size() - 1);
  const double inverse_norm = SpectralNorm(inverse);
  const double lower = 1.0 / (inverse_norm * inverse_norm);
  const double slack = DefaultHermitianTolerance(gram) + 1e-10 * lower;
  if (bounds.mu < lower - slack || !(bounds.mu > 0.0)) {
    std::ostringstream os;
    os << "ComputeCoercivityBounds: lambda_min(B^*B) = " << bounds.mu
       << " is below ||B^{-1}||^{-2} = " << lower;
    throw Error(ErrorCode::kNumerical, os.str());
  }
  return bounds;
}

}  // namespace hypocert
