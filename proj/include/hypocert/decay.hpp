#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hypocert/operator_core.hpp"
#include "hypocert/theta_scheme.hpp"

namespace hypocert {

enum class CurveKind { kContinuous, kDiscrete };

// Samples of ||e^{-Bt}|| (continuous) or ||D^k|| (discrete, k = 0, 1, ...).
struct NormCurve {
  std::vector<double> abscissae;
  std::vector<double> values;
  CurveKind kind = CurveKind::kContinuous;
};

// Least-squares fit of log(1 - ||e^{-Bt}||) = log(c) + a log(t).
struct DecayFit {
  double a_hat = 0.0;
  double c_hat = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> fit_window{0.0, 0.0};
  int points = 0;
};

struct Trajectory {
  std::vector<double> abscissae;
  std::vector<ComplexVector> states;
};

// n points log-spaced on [lo, hi], endpoints included. Requires 0 < lo < hi
// and n >= 2.
std::vector<double> LogSpace(double lo, double hi, int n);

NormCurve PropagatorNormCurve(const OperatorMatrix& b,
                              const std::vector<double>& t_grid);

// Fits over the samples with t inside `window` (all samples when empty).
// Throws kNoDecay when every 1 - value is at machine-noise level and
// kPrecondition when 1 - value is not positive throughout the window.
DecayFit FitShortTimeExponent(
    const NormCurve& curve,
    std::optional<std::pair<double, double>> window = std::nullopt);

// Default fit: 50 log-spaced samples on [1e-4, 1e-2].
DecayFit FitShortTimeExponent(const OperatorMatrix& b, double t_min = 1e-4,
                              double t_max = 1e-2, int samples = 50);

// values[j] = ||D^j||, j = 0..k_max.
NormCurve DiscreteNormSequence(const OperatorMatrix& b, const ThetaScheme& scheme,
                               int k_max);
NormCurve DiscreteNormSequence(const OperatorMatrix& d, int k_max);

// Smallest j >= 1 with values[j] < 1 - tol. If `dhc_index` is given and a
// drop is found, throws kNumerical unless j == *dhc_index + 1.
std::optional<int> FirstContractionIndex(const NormCurve& curve, double tol,
                                         std::optional<int> dhc_index = std::nullopt);

Trajectory EvolveContinuous(const OperatorMatrix& b, const ComplexVector& x0,
                            const std::vector<double>& t_grid);

Trajectory EvolveDiscrete(const OperatorMatrix& b, const ThetaScheme& scheme,
                          const ComplexVector& x0, int k_max);

}  // namespace hypocert
