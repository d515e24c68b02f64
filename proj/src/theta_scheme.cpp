#include "hypocert/theta_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hypocert {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

double DefaultRelativeTolerance(Eigen::Index dim) {
  return static_cast<double>(std::max<Eigen::Index>(dim, 4)) * kEpsilon;
}

Contractivity Decide(double margin, double tolerance) {
  // margin > 0 means contractive side.
  if (margin > tolerance) return Contractivity::kContractive;
  if (margin >= -tolerance) return Contractivity::kSemiContractive;
  return Contractivity::kExpanding;
}

ComplexMatrix IdentityMinusGram(const ComplexMatrix& d) {
  return ComplexMatrix::Identity(d.rows(), d.cols()) - d.adjoint() * d;
}

}  // namespace

ThetaScheme::ThetaScheme(double theta, double tau) : theta_(theta), tau_(tau) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    std::ostringstream os;
    os << "ThetaScheme: theta = " << theta << " is outside [0, 1]";
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    std::ostringstream os;
    os << "ThetaScheme: tau = " << tau << " must be positive and finite";
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
}

Complex MobiusTransform(Complex z, const ThetaScheme& s) {
  const Complex denominator = 1.0 - s.theta() * s.tau() * z;
  if (denominator == Complex(0.0, 0.0)) {
    throw Error(ErrorCode::kSchemeInapplicable,
                "MobiusTransform: z is the pole 1/(theta tau)");
  }
  return (1.0 + (1.0 - s.theta()) * s.tau() * z) / denominator;
}

OperatorMatrix ThetaOperator(const OperatorMatrix& b, const ThetaScheme& s) {
  const Eigen::Index n = b.dim();
  const ComplexMatrix identity = ComplexMatrix::Identity(n, n);
  const ComplexMatrix explicit_part =
      identity - (s.tau() * (1.0 - s.theta())) * b.matrix();
  if (s.theta() == 0.0) return OperatorMatrix(explicit_part);

  const ComplexMatrix implicit_part =
      identity + (s.tau() * s.theta()) * b.matrix();
  try {
    const ComplexMatrix resolvent = Invert(implicit_part);
    return OperatorMatrix(ComplexMatrix(resolvent * explicit_part));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotInvertible) throw;
    const Complex pole(-1.0 / (s.theta() * s.tau()), 0.0);
    Complex offending = pole;
    double best = std::numeric_limits<double>::infinity();
    for (const Complex& z : Spectrum(b)) {
      if (std::abs(z - pole) < best) {
        best = std::abs(z - pole);
        offending = z;
      }
    }
    std::ostringstream os;
    os.precision(17);
    os << "ThetaOperator: I + tau*theta*B is singular for theta = "
       << s.theta() << ", tau = " << s.tau() << "; eigenvalue "
       << offending.real() << (offending.imag() < 0 ? " - " : " + ")
       << std::abs(offending.imag()) << "i of B coincides with -1/(theta*tau) = "
       << pole.real();
    throw Error(ErrorCode::kSchemeInapplicable, os.str());
  }
}

ComplexMatrix ContractivityForm(const ComplexMatrix& a, const ThetaScheme& s) {
  const double tau = s.tau();
  const ComplexMatrix form =
      -2.0 * tau * HermitianPart(a) +
      (tau * tau * (2.0 * s.theta() - 1.0)) * (a.adjoint() * a);
  return HermitianPart(form);
}

const char* ContractivityName(Contractivity c) {
  switch (c) {
    case Contractivity::kContractive: return "contractive";
    case Contractivity::kSemiContractive: return "semi-contractive";
    case Contractivity::kExpanding: return "expanding";
  }
  return "unknown";
}

ContractivityClass ClassifyContractivity(const OperatorMatrix& b,
                                         const ThetaScheme& s,
                                         std::optional<double> tolerance) {
  const double tol = tolerance.value_or(DefaultRelativeTolerance(b.dim()));
  if (!(tol >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "ClassifyContractivity: tolerance must be nonnegative");
  }
  const OperatorMatrix d = ThetaOperator(b, s);
  ContractivityClass result;
  result.norm = SpectralNorm(d);
  result.norm_tolerance = tol * std::max(1.0, result.norm);
  result.norm_route = Decide(1.0 - result.norm, result.norm_tolerance);

  const ComplexMatrix a = -b.matrix();
  const ComplexMatrix form = ContractivityForm(a, s);
  const double b_norm = SpectralNorm(b);
  const double form_scale =
      2.0 * s.tau() * SpectralNorm(HermitianPart(a)) +
      s.tau() * s.tau() * std::abs(2.0 * s.theta() - 1.0) * b_norm * b_norm;
  result.form_tolerance = tol * form_scale;
  result.form_min_eigenvalue = HermitianEigenvalues(form)(0);
  result.form_route = Decide(result.form_min_eigenvalue, result.form_tolerance);

  result.classification = result.norm_route;
  result.routes_agree = result.norm_route == result.form_route;
  const bool norm_near =
      std::abs(1.0 - result.norm) <= 10.0 * result.norm_tolerance;
  const bool form_near =
      std::abs(result.form_min_eigenvalue) <= 10.0 * result.form_tolerance;
  result.marginal = !result.routes_agree || norm_near || form_near;
  return result;
}

HypocontractivityCheck IsHypocontractive(const OperatorMatrix& b,
                                         const ThetaScheme& s,
                                         std::optional<double> tolerance) {
  const OperatorMatrix d = ThetaOperator(b, s);
  HypocontractivityCheck check;
  check.tolerance_used = tolerance.value_or(DefaultSpectralTolerance(d.matrix()));
  check.spectral_radius = SpectralRadius(d.matrix());
  check.hypocontractive = check.spectral_radius < 1.0 - check.tolerance_used;
  check.marginal = std::abs(1.0 - check.spectral_radius) <=
                   10.0 * check.tolerance_used;
  return check;
}

IndexResult DhcIndexOfIteration(const OperatorMatrix& d,
                                std::optional<double> tolerance,
                                std::optional<int> cap) {
  const HermitianCertificate base =
      ClassifyHermitian(IdentityMinusGram(d.matrix()), tolerance);
  if (!base.IsPositiveSemidefinite()) {
    std::ostringstream os;
    os << "DhcIndex: D is not semi-contractive (lambda_min(I - D^*D) = "
       << base.min_eigenvalue << ")";
    throw Error(ErrorCode::kPrecondition, os.str());
  }
  const int search_cap = cap.value_or(static_cast<int>(d.dim()) - 1);
  return SearchCoercivityIndex(d.matrix(), base.matrix, tolerance, search_cap);
}

IndexResult DhcIndex(const OperatorMatrix& b, const ThetaScheme& s,
                     std::optional<double> tolerance, std::optional<int> cap) {
  return DhcIndexOfIteration(ThetaOperator(b, s), tolerance, cap);
}

const char* StepSizeWindowKindName(StepSizeWindowKind k) {
  switch (k) {
    case StepSizeWindowKind::kAllTau: return "all tau";
    case StepSizeWindowKind::kBounded: return "(0, tau0]";
    case StepSizeWindowKind::kEmpty: return "empty";
  }
  return "unknown";
}

StepSizeWindow MaxStepsize(const OperatorMatrix& b, double theta,
                           const StepSizeOptions& options) {
  if (!(theta >= 0.0 && theta < 0.5)) {
    std::ostringstream os;
    os << "MaxStepsize: theta = " << theta
       << " is outside [0, 1/2); for theta >= 1/2 classify directly";
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
  const HypocoercivityCheck hc = IsHypocoercive(b);
  if (!hc.hypocoercive) {
    std::ostringstream os;
    os << "MaxStepsize: B is not hypocoercive (min Re sigma(B) = "
       << hc.min_real_part << ")";
    throw Error(ErrorCode::kPrecondition, os.str());
  }

  StepSizeWindow window;
  const HermitianCertificate bh =
      ClassifyHermitian(HermitianPart(b.matrix()), options.tolerance);
  if (!bh.IsCoercive()) {
    // B_H has a (near) null or negative direction x while x^* B^* B x > 0, so
    // 2 B_H >= tau (1 - 2 theta) B^* B fails for every tau > 0.
    window.kind = StepSizeWindowKind::kEmpty;
    window.marginal = bh.marginal;
    window.reason = bh.IsPositiveSemidefinite()
                        ? "Hermitian part is not coercive (index > 0)"
                        : "Hermitian part is indefinite";
    return window;
  }

  // 2 B_H >= tau (1 - 2 theta) R^* R  <=>  tau <= 2 lambda_min(R^{-*} B_H R^{-1}) / (1 - 2 theta).
  const ComplexMatrix gram = b.matrix().adjoint() * b.matrix();
  ComplexMatrix reduced;
  if (options.factor == SquareRootFactor::kHermitianSquareRoot) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(HermitianPart(gram));
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::kNumerical, "MaxStepsize: eigensolver failed");
    }
    if (!(solver.eigenvalues()(0) > 0.0)) {
      throw Error(ErrorCode::kNotInvertible, "MaxStepsize: B^*B is singular");
    }
    const ComplexMatrix inv_root = solver.operatorInverseSqrt();
    reduced = inv_root * bh.matrix * inv_root;
  } else {
    Eigen::LLT<ComplexMatrix> llt(HermitianPart(gram));
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::kNotInvertible,
                  "MaxStepsize: Cholesky factorization of B^*B failed");
    }
    // B^*B = L L^*, so lambda(L^{-1} B_H L^{-*}) is the generalized spectrum.
    const auto& l = llt.matrixL();
    const ComplexMatrix left = l.solve(bh.matrix);
    reduced = l.solve(ComplexMatrix(left.adjoint())).adjoint();
  }
  const double lambda_min = HermitianEigenvalues(reduced)(0);
  window.kind = StepSizeWindowKind::kBounded;
  window.tau0 = 2.0 * lambda_min / (1.0 - 2.0 * theta);
  window.marginal = bh.marginal;

  const ContractivityClass at = ClassifyContractivity(
      b, ThetaScheme(theta, window.tau0), options.verification_tolerance);
  const ContractivityClass past = ClassifyContractivity(
      b, ThetaScheme(theta, 1.01 * window.tau0), options.verification_tolerance);
  window.norm_at_tau0 = at.norm;
  window.norm_past_tau0 = past.norm;
  if (at.classification == Contractivity::kExpanding ||
      past.classification != Contractivity::kExpanding) {
    std::ostringstream os;
    os.precision(17);
    os << "MaxStepsize: verification failed for tau0 = " << window.tau0
       << " (||D(tau0)|| = " << at.norm << ", ||D(1.01 tau0)|| = " << past.norm
       << ")";
    throw Error(ErrorCode::kNumerical, os.str());
  }
  return window;
}

}  // namespace hypocert
