#pragma once

#include <optional>
#include <string>

#include "hypocert/coercivity.hpp"
#include "hypocert/operator_core.hpp"

namespace hypocert {

// One member of the theta family x_{k+1} = (I + tau theta B)^{-1}
// (I - tau (1 - theta) B) x_k: theta = 0 explicit Euler, 1/2 midpoint,
// 1 implicit Euler.
class ThetaScheme {
 public:
  // Throws kInvalidArgument unless 0 <= theta <= 1 and tau > 0 (finite).
  ThetaScheme(double theta, double tau);

  double theta() const { return theta_; }
  double tau() const { return tau_; }

 private:
  double theta_;
  double tau_;
};

// z -> (1 + (1 - theta) tau z) / (1 - theta tau z). Throws
// kSchemeInapplicable at the pole z = 1 / (theta tau).
Complex MobiusTransform(Complex z, const ThetaScheme& scheme);

// D = M_{theta,tau}(-B). For theta = 0 this is I - tau B with no solve.
// Throws kSchemeInapplicable when I + tau theta B is singular; the message
// names the eigenvalue of B closest to -1/(theta tau).
OperatorMatrix ThetaOperator(const OperatorMatrix& b, const ThetaScheme& scheme);

// -2 tau A_H + tau^2 (2 theta - 1) A^* A for the generator A (callers pass
// A = -B). Hermitian by construction.
ComplexMatrix ContractivityForm(const ComplexMatrix& a, const ThetaScheme& scheme);

enum class Contractivity { kContractive, kSemiContractive, kExpanding };

const char* ContractivityName(Contractivity c);

// Result of classifying D by two routes: the spectral norm ||D|| against 1,
// and the sign of lambda_min of ContractivityForm(-B).
struct ContractivityClass {
  Contractivity classification = Contractivity::kExpanding;
  double norm = 0.0;
  double form_min_eigenvalue = 0.0;
  Contractivity norm_route = Contractivity::kExpanding;
  Contractivity form_route = Contractivity::kExpanding;
  double norm_tolerance = 0.0;
  double form_tolerance = 0.0;
  // A deciding scalar lies within 10x its tolerance of the threshold, or the
  // two routes disagree. The reported class then follows the norm route.
  bool marginal = false;
  bool routes_agree = true;
};

// Relative tolerance default: max(dim, 4) * machine epsilon. The norm route
// compares ||D|| with 1 +- tol * max(1, ||D||); the form route compares
// lambda_min(form) with +- tol * (2 tau ||B_H|| + tau^2 |2 theta - 1| ||B||^2).
ContractivityClass ClassifyContractivity(
    const OperatorMatrix& b, const ThetaScheme& scheme,
    std::optional<double> tolerance = std::nullopt);

struct HypocontractivityCheck {
  bool hypocontractive = false;
  double spectral_radius = 0.0;
  double tolerance_used = 0.0;
  bool marginal = false;
};

// rho(D) < 1 - tol. Default tol is DefaultSpectralTolerance(D).
HypocontractivityCheck IsHypocontractive(
    const OperatorMatrix& b, const ThetaScheme& scheme,
    std::optional<double> tolerance = std::nullopt);

// Smallest m <= cap with sum_{j=0}^m (D^*)^j (I - D^* D) D^j coercive.
// Throws kPrecondition unless D is semi-contractive (I - D^* D >= 0 to tol).
IndexResult DhcIndexOfIteration(const OperatorMatrix& d,
                                std::optional<double> tolerance = std::nullopt,
                                std::optional<int> cap = std::nullopt);

IndexResult DhcIndex(const OperatorMatrix& b, const ThetaScheme& scheme,
                     std::optional<double> tolerance = std::nullopt,
                     std::optional<int> cap = std::nullopt);

enum class StepSizeWindowKind { kAllTau, kBounded, kEmpty };

const char* StepSizeWindowKindName(StepSizeWindowKind k);

// Set of tau > 0 for which M_{theta,tau}(-B) is semi-contractive.
struct StepSizeWindow {
  StepSizeWindowKind kind = StepSizeWindowKind::kEmpty;
  double tau0 = 0.0;             // only for kBounded
  double norm_at_tau0 = 0.0;     // ||D(tau0)||, reported as computed
  double norm_past_tau0 = 0.0;   // ||D(1.01 tau0)||
  bool marginal = false;
  std::string reason;
};

enum class SquareRootFactor { kHermitianSquareRoot, kCholesky };

struct StepSizeOptions {
  // Tolerance for deciding whether B_H is coercive.
  std::optional<double> tolerance;
  // Tolerance for re-classifying D at tau0 (must not be expanding) and at
  // 1.01 tau0 (must be expanding).
  double verification_tolerance = 1e-9;
  SquareRootFactor factor = SquareRootFactor::kHermitianSquareRoot;
};

// For 0 <= theta < 1/2 and hypocoercive B: (0, tau0] with
// tau0 = 2 lambda_min(R^{-*} B_H R^{-1}) / (1 - 2 theta), R^* R = B^* B, when
// B_H is coercive; empty otherwise. Throws kInvalidArgument for theta outside
// [0, 1/2), kPrecondition for non-hypocoercive B, and kNumerical when the
// post-verification fails.
StepSizeWindow MaxStepsize(const OperatorMatrix& b, double theta,
                           const StepSizeOptions& options = {});

}  // namespace hypocert
