#include "hypocert/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hypocert {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
// Powers up to this exponent are accumulated by repeated multiplication.
constexpr int kPlainProductLimit = 32;

void RequireIncreasingPositive(const std::vector<double>& grid,
                               const char* what) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0 ||
        (i > 0 && !(grid[i] > grid[i - 1]))) {
      std::ostringstream os;
      os << what << ": grid must be finite, nonnegative and strictly increasing"
         << " (offending index " << i << ")";
      throw Error(ErrorCode::kInvalidArgument, os.str());
    }
  }
}

ComplexMatrix Power(const ComplexMatrix& d, int k) {
  ComplexMatrix result = ComplexMatrix::Identity(d.rows(), d.cols());
  ComplexMatrix base = d;
  while (k > 0) {
    if (k & 1) result = (result * base).eval();
    k >>= 1;
    if (k > 0) base = (base * base).eval();
  }
  return result;
}

}  // namespace

std::vector<double> LogSpace(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    std::ostringstream os;
    os << "LogSpace: need 0 < lo < hi and n >= 2 (got lo = " << lo
       << ", hi = " << hi << ", n = " << n << ")";
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / (n - 1);
  for (int i = 0; i < n; ++i) grid[i] = std::exp(log_lo + step * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

NormCurve PropagatorNormCurve(const OperatorMatrix& b,
                              const std::vector<double>& t_grid) {
  RequireIncreasingPositive(t_grid, "PropagatorNormCurve");
  NormCurve curve;
  curve.kind = CurveKind::kContinuous;
  curve.abscissae = t_grid;
  curve.values.reserve(t_grid.size());
  for (double t : t_grid) {
    curve.values.push_back(
        SpectralNorm(MatrixExponential(ComplexMatrix(-t * b.matrix()))));
  }
  return curve;
}

DecayFit FitShortTimeExponent(const NormCurve& curve,
                              std::optional<std::pair<double, double>> window) {
  if (curve.kind != CurveKind::kContinuous) {
    throw Error(ErrorCode::kInvalidArgument,
                "FitShortTimeExponent: curve must be continuous");
  }
  std::vector<double> xs, ys;
  bool any_decay = false;
  bool all_positive = true;
  bool any_growth = false;
  double t_min = std::numeric_limits<double>::infinity();
  double t_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.abscissae.size(); ++i) {
    const double t = curve.abscissae[i];
    if (window && (t < window->first || t > window->second)) continue;
    if (!(t > 0.0)) continue;
    const double decay = 1.0 - curve.values[i];
    // Anything below a few ulps of 1 is rounding noise.
    if (decay > 16.0 * kEpsilon) any_decay = true;
    if (decay < -16.0 * kEpsilon) any_growth = true;
    if (!(decay > 0.0)) {
      all_positive = false;
      continue;
    }
    xs.push_back(std::log(t));
    ys.push_back(std::log(decay));
    t_min = std::min(t_min, t);
    t_max = std::max(t_max, t);
  }
  if (any_growth) {
    throw Error(ErrorCode::kPrecondition,
                "FitShortTimeExponent: ||e^{-Bt}|| exceeds 1 inside the window");
  }
  if (!any_decay) {
    throw Error(ErrorCode::kNoDecay,
                "FitShortTimeExponent: no decay detected (1 - ||e^{-Bt}|| is at "
                "rounding level throughout the window)");
  }
  if (!all_positive || xs.size() < 2) {
    throw Error(ErrorCode::kPrecondition,
                "FitShortTimeExponent: 1 - ||e^{-Bt}|| must be positive at "
                "every sample of the window (at least two samples)");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  DecayFit fit;
  fit.a_hat = sxy / sxx;
  fit.c_hat = std::exp(my - fit.a_hat * mx);
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.fit_window = {t_min, t_max};
  fit.points = static_cast<int>(xs.size());
  return fit;
}

DecayFit FitShortTimeExponent(const OperatorMatrix& b, double t_min,
                              double t_max, int samples) {
  return FitShortTimeExponent(
      PropagatorNormCurve(b, LogSpace(t_min, t_max, samples)));
}

NormCurve DiscreteNormSequence(const OperatorMatrix& d, int k_max) {
  if (k_max < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "DiscreteNormSequence: k_max must be >= 1");
  }
  NormCurve curve;
  curve.kind = CurveKind::kDiscrete;
  const Eigen::Index n = d.dim();
  ComplexMatrix power = ComplexMatrix::Identity(n, n);
  for (int k = 0; k <= k_max; ++k) {
    if (k > kPlainProductLimit) {
      power = Power(d.matrix(), k);
    } else if (k > 0) {
      power = (power * d.matrix()).eval();
    }
    curve.abscissae.push_back(static_cast<double>(k));
    curve.values.push_back(SpectralNorm(power));
  }
  return curve;
}

NormCurve DiscreteNormSequence(const OperatorMatrix& b, const ThetaScheme& s,
                               int k_max) {
  return DiscreteNormSequence(ThetaOperator(b, s), k_max);
}

std::optional<int> FirstContractionIndex(const NormCurve& curve, double tol,
                                         std::optional<int> dhc_index) {
  if (curve.kind != CurveKind::kDiscrete) {
    throw Error(ErrorCode::kInvalidArgument,
                "FirstContractionIndex: curve must be discrete");
  }
  for (std::size_t j = 1; j < curve.values.size(); ++j) {
    if (curve.values[j] < 1.0 - tol) {
      const int first = static_cast<int>(j);
      if (dhc_index && first != *dhc_index + 1) {
        std::ostringstream os;
        os << "FirstContractionIndex: first drop at j = " << first
           << " but the hypocontractivity index is " << *dhc_index;
        throw Error(ErrorCode::kNumerical, os.str());
      }
      return first;
    }
  }
  return std::nullopt;
}

Trajectory EvolveContinuous(const OperatorMatrix& b, const ComplexVector& x0,
                            const std::vector<double>& t_grid) {
  if (x0.size() != b.dim()) {
    throw Error(ErrorCode::kInvalidArgument,
                "EvolveContinuous: initial state dimension mismatch");
  }
  RequireIncreasingPositive(t_grid, "EvolveContinuous");
  Trajectory traj;
  traj.abscissae = t_grid;
  for (double t : t_grid) {
    if (t == 0.0) {
      traj.states.push_back(x0);
    } else {
      traj.states.push_back(MatrixExponential(ComplexMatrix(-t * b.matrix())) * x0);
    }
  }
  return traj;
}

Trajectory EvolveDiscrete(const OperatorMatrix& b, const ThetaScheme& s,
                          const ComplexVector& x0, int k_max) {
  if (x0.size() != b.dim()) {
    throw Error(ErrorCode::kInvalidArgument,
                "EvolveDiscrete: initial state dimension mismatch");
  }
  if (k_max < 0) {
    throw Error(ErrorCode::kInvalidArgument, "EvolveDiscrete: k_max must be >= 0");
  }
  const OperatorMatrix d = ThetaOperator(b, s);
  Trajectory traj;
  traj.abscissae.push_back(0.0);
  traj.states.push_back(x0);
  for (int k = 0; k < k_max; ++k) {
    traj.abscissae.push_back(static_cast<double>(k + 1));
    traj.states.push_back(d.matrix() * traj.states.back());
  }
  return traj;
}

}  // namespace hypocert
