#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hypocert/coercivity.hpp"
#include "hypocert/decay.hpp"
#include "hypocert/operator_core.hpp"
#include "hypocert/theta_scheme.hpp"

namespace hypocert {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Matrix interchange format
//
//   {"dim": 2, "entries": [[0, 0], [0.5, 0], [-0.5, 0], [1, 0]], "label": "B"}
//
// entries are row-major [re, im] pairs; a bare number x is read as [x, 0].
// ---------------------------------------------------------------------------

struct MatrixDocument {
  OperatorMatrix matrix;
  std::optional<std::string> label;
};

// Throws kParse with position or entry-index information on malformed
// syntax, a length mismatch, or non-finite values.
MatrixDocument ParseMatrixDocument(std::string_view text);
MatrixDocument LoadMatrixDocument(const std::string& path);

// Numbers are written with 17 significant digits so parsing recovers the
// exact doubles.
std::string SerializeMatrixDocument(const MatrixDocument& doc);

std::string FormatDouble(double value);

// Writes to a temporary sibling file and renames it over `path`.
void WriteFileAtomic(const std::string& path, std::string_view content);

enum class OutputFormat { kJson, kCsv };

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct AnalysisOptions {
  // Hermitian classifications (B_H, index partial sums); default per matrix.
  std::optional<double> tolerance;
  // Index search cap; default dim - 1.
  std::optional<int> cap;
  // Relative tolerance of the contractivity routes; default max(dim,4)*eps.
  std::optional<double> contractivity_tolerance;
  // Drop threshold for ||D^j|| < 1 - plateau_tolerance.
  double plateau_tolerance = 1e-9;
  double step_size_verification_tolerance = 1e-9;
};

struct EntryError {
  ErrorCode code = ErrorCode::kNumerical;
  std::string message;
};

struct SchemeResult {
  double theta = 0.0;
  double tau = 0.0;
  std::optional<ContractivityClass> contractivity;
  std::optional<HypocontractivityCheck> hypocontractivity;
  // Empty with `dhc_status` set when D is not semi-contractive.
  std::optional<IndexResult> dhc_index;
  std::string dhc_status;
  std::optional<int> first_contraction_index;
  int plateau_k_max = 0;
  // first_contraction_index == dhc_index + 1 whenever both are finite.
  bool plateau_consistent = true;
  std::optional<EntryError> error;
};

struct WindowResult {
  double theta = 0.0;
  std::optional<StepSizeWindow> window;
  // "max_stepsize" for theta < 1/2, "semi-dissipativity" for theta >= 1/2.
  std::string source;
  std::optional<EntryError> error;
};

struct AnalysisReport {
  MatrixDocument input;
  std::vector<double> thetas;
  std::vector<double> taus;
  AnalysisOptions options;
  SemiDissipativity semi_dissipative;
  HypocoercivityCheck hypocoercive;
  std::optional<IndexResult> hc_index;
  std::string hc_status;
  double decay_rate = 0.0;
  std::vector<SchemeResult> schemes;
  std::vector<WindowResult> step_size_windows;
  bool marginal = false;
};

// Per-scheme failures are recorded in the entries and never abort the run.
AnalysisReport RunAnalyze(const MatrixDocument& input,
                          const std::vector<double>& thetas,
                          const std::vector<double>& taus,
                          const AnalysisOptions& options = {});

std::string ReportToJson(const AnalysisReport& report);
std::string ReportToCsv(const AnalysisReport& report);

// Process exit codes.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitSchemeInapplicable = 3;
inline constexpr int kExitNumericalFailure = 4;

// 0, 3 when the only failures are inapplicable schemes, 4 otherwise.
int ReportExitCode(const AnalysisReport& report);

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepRow {
  double tau = 0.0;
  std::optional<ContractivityClass> contractivity;
  std::optional<EntryError> error;
};

struct SweepResult {
  double theta = 0.0;
  std::vector<SweepRow> rows;
};

// Log-spaced tau grid on [lo, hi] with n >= 2 points.
SweepResult RunSweep(const OperatorMatrix& b, double theta, double lo, double hi,
                     int n, std::optional<double> tolerance = std::nullopt);

// Header: tau,norm_D,class,form_min_eigenvalue
std::string SweepToCsv(const SweepResult& sweep);
std::string SweepToJson(const SweepResult& sweep);
int SweepExitCode(const SweepResult& sweep);

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

struct ContinuousCurveResult {
  NormCurve curve;
  std::optional<DecayFit> fit;
  std::optional<EntryError> fit_error;
};

struct DiscreteCurveResult {
  double theta = 0.0;
  double tau = 0.0;
  NormCurve curve;
  double plateau_tolerance = 1e-9;
  std::optional<int> first_contraction_index;
};

ContinuousCurveResult RunContinuousCurve(const OperatorMatrix& b,
                                         const std::vector<double>& t_grid);
DiscreteCurveResult RunDiscreteCurve(const OperatorMatrix& b,
                                     const ThetaScheme& scheme, int k_max,
                                     double plateau_tolerance = 1e-9);

// Header line "t,norm" / "k,norm", one row per sample, then '#'-prefixed
// summary lines.
std::string CurveToCsv(const ContinuousCurveResult& result);
std::string CurveToCsv(const DiscreteCurveResult& result);
std::string CurveToJson(const ContinuousCurveResult& result);
std::string CurveToJson(const DiscreteCurveResult& result);

}  // namespace hypocert
