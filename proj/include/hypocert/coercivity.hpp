#pragma once

#include <optional>
#include <vector>

#include "hypocert/operator_core.hpp"

namespace hypocert {

// Outcome of a search for the smallest m such that a nondecreasing sequence of
// Hermitian partial sums S_0 <= S_1 <= ... becomes coercive. Used for both
// the continuous index (terms (B^*)^j B_H B^j) and the discrete index (terms
// (D^*)^j (I - D^* D) D^j).
struct IndexResult {
  std::optional<int> index;
  // Minimum eigenvalue of the certifying partial sum; 0 when index is empty.
  double witness_kappa = 0.0;
  int search_cap = 0;
  // partial_min_eigenvalues[j] = lambda_min(S_j), j = 0..index (or 0..cap).
  std::vector<double> partial_min_eigenvalues;
  // The certifying partial sum S_index (or S_cap when no index was found).
  ComplexMatrix final_partial_sum;
  double tolerance_used = 0.0;
  // The deciding eigenvalue lies within 10 * tolerance_used of zero.
  bool marginal = false;
};

struct CoercivityBounds {
  double mu = 0.0;            // lambda_min(B^* B)
  double lambda_upper = 0.0;  // lambda_max(B^* B) = ||B||^2
};

struct SemiDissipativity {
  bool semi_dissipative = false;
  HermitianCertificate certificate;  // for B_H
};

struct HypocoercivityCheck {
  bool hypocoercive = false;
  double min_real_part = 0.0;  // spectral abscissa of B
  double tolerance_used = 0.0;
  bool marginal = false;
};

// Default threshold for spectral (eigenvalue location) decisions:
// sqrt(eps) * max(1, ||A||). Eigenvalues of defective matrices are only
// determined to O(sqrt(eps)), so the tighter Hermitian default is unsuitable.
double DefaultSpectralTolerance(const ComplexMatrix& a);

// B_H >= 0 to tolerance.
SemiDissipativity IsSemiDissipative(
    const OperatorMatrix& b, std::optional<double> tolerance = std::nullopt);

// Every eigenvalue of B has real part > tolerance, i.e. sigma(-B) lies in the
// open left half plane.
HypocoercivityCheck IsHypocoercive(
    const OperatorMatrix& b, std::optional<double> tolerance = std::nullopt);

// min Re sigma(B).
double SpectralAbscissaDecayRate(const OperatorMatrix& b);

// Smallest m <= cap with sum_{j=0}^m (B^*)^j B_H B^j coercive. The default cap
// is dim - 1; when `tolerance` is empty each partial sum is classified with
// its own default Hermitian tolerance. Throws kPrecondition unless B is
// semi-dissipative.
IndexResult HcIndex(const OperatorMatrix& b,
                    std::optional<double> tolerance = std::nullopt,
                    std::optional<int> cap = std::nullopt);

// Generic search used by HcIndex and the discrete index: S_m = sum_{j<=m}
// (P^*)^j Q P^j with Q Hermitian positive semidefinite.
IndexResult SearchCoercivityIndex(const ComplexMatrix& propagator,
                                  const ComplexMatrix& base_term,
                                  std::optional<double> tolerance, int cap);

// Spectral bounds of B^* B. Throws kNotInvertible for singular B and
// kNumerical if mu falls below ||B^{-1}||^{-2} beyond tolerance.
CoercivityBounds ComputeCoercivityBounds(const OperatorMatrix& b);

}  // namespace hypocert
