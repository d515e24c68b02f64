#include "hypocert/hypocert.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "hypocert/coercivity.hpp"
#include "hypocert/decay.hpp"
#include "hypocert/report.hpp"
#include "hypocert/theta_scheme.hpp"

struct hypocert_matrix {
  hypocert::MatrixDocument doc;
};

namespace {

thread_local std::string g_last_error;

std::optional<double> Tol(double tol) {
  if (std::isnan(tol) || tol < 0.0) return std::nullopt;
  return tol;
}

std::optional<int> Cap(int cap) {
  if (cap < 0) return std::nullopt;
  return cap;
}

hypocert_status Fail(hypocert_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
hypocert_status Guard(F&& f) {
  g_last_error.clear();
  try {
    f();
    return HYPOCERT_OK;
  } catch (const hypocert::Error& e) {
    return Fail(static_cast<hypocert_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(HYPOCERT_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(HYPOCERT_E_INTERNAL, e.what());
  } catch (...) {
    return Fail(HYPOCERT_E_INTERNAL, "unknown exception");
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void RequireNonNull(const void* p, const char* name) {
  if (p == nullptr) {
    throw hypocert::Error(hypocert::ErrorCode::kInvalidArgument,
                          std::string(name) + " must not be null");
  }
}

const hypocert::OperatorMatrix& Matrix(const hypocert_matrix* m) {
  RequireNonNull(m, "matrix handle");
  return m->doc.matrix;
}

hypocert::OutputFormat Format(hypocert_format f) {
  switch (f) {
    case HYPOCERT_FORMAT_JSON: return hypocert::OutputFormat::kJson;
    case HYPOCERT_FORMAT_CSV: return hypocert::OutputFormat::kCsv;
  }
  throw hypocert::Error(hypocert::ErrorCode::kInvalidArgument,
                        "unknown output format");
}

int IndexOrNone(const hypocert::IndexResult& r) {
  return r.index ? *r.index : HYPOCERT_INDEX_NONE;
}

}  // namespace

extern "C" {

const char* hypocert_version(void) { return hypocert::kToolVersion; }

const char* hypocert_last_error(void) { return g_last_error.c_str(); }

const char* hypocert_status_string(hypocert_status status) {
  if (status == HYPOCERT_OK) return "ok";
  if (status == HYPOCERT_E_INTERNAL) return "internal_error";
  if (status < HYPOCERT_OK || status > HYPOCERT_E_INTERNAL) return "unknown";
  return hypocert::ErrorCodeName(static_cast<hypocert::ErrorCode>(status));
}

void hypocert_string_free(char* s) { std::free(s); }

void hypocert_options_init(hypocert_options* options) {
  if (options == nullptr) return;
  options->tol = HYPOCERT_DEFAULT_TOL;
  options->cap = HYPOCERT_DEFAULT_CAP;
  options->contractivity_tol = HYPOCERT_DEFAULT_TOL;
  options->plateau_tol = 1e-9;
}

hypocert_status hypocert_matrix_create(size_t dim, const double* re_im,
                                       hypocert_matrix** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    RequireNonNull(re_im, "re_im");
    if (dim == 0 || dim > static_cast<size_t>(hypocert::kMaxDimension)) {
      throw hypocert::Error(hypocert::ErrorCode::kInvalidArgument,
                            "dim must lie in [1, 512]");
    }
    const auto n = static_cast<Eigen::Index>(dim);
    hypocert::ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const size_t k = 2 * static_cast<size_t>(i * n + j);
        m(i, j) = hypocert::Complex(re_im[k], re_im[k + 1]);
      }
    }
    *out = new hypocert_matrix{
        hypocert::MatrixDocument{hypocert::OperatorMatrix(std::move(m)), {}}};
  });
}

hypocert_status hypocert_matrix_parse(const char* text, size_t length,
                                      hypocert_matrix** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    RequireNonNull(text, "text");
    *out = new hypocert_matrix{
        hypocert::ParseMatrixDocument(std::string_view(text, length))};
  });
}

hypocert_status hypocert_matrix_load(const char* path, hypocert_matrix** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    RequireNonNull(path, "path");
    *out = new hypocert_matrix{hypocert::LoadMatrixDocument(path)};
  });
}

void hypocert_matrix_destroy(hypocert_matrix* m) { delete m; }

size_t hypocert_matrix_dim(const hypocert_matrix* m) {
  return m == nullptr ? 0 : static_cast<size_t>(m->doc.matrix.dim());
}

hypocert_status hypocert_matrix_entry(const hypocert_matrix* m, size_t row,
                                      size_t col, double* re, double* im) {
  return Guard([&] {
    const auto& a = Matrix(m);
    if (row >= static_cast<size_t>(a.dim()) || col >= static_cast<size_t>(a.dim())) {
      throw hypocert::Error(hypocert::ErrorCode::kInvalidArgument,
                            "entry index out of range");
    }
    const hypocert::Complex z = a(static_cast<Eigen::Index>(row),
                                  static_cast<Eigen::Index>(col));
    if (re) *re = z.real();
    if (im) *im = z.imag();
  });
}

hypocert_status hypocert_matrix_serialize(const hypocert_matrix* m, char** out) {
  return Guard([&] {
    RequireNonNull(m, "matrix handle");
    RequireNonNull(out, "out");
    *out = CopyString(hypocert::SerializeMatrixDocument(m->doc));
  });
}

hypocert_status hypocert_is_semi_dissipative(const hypocert_matrix* b,
                                             double tol, int* out_flag,
                                             double* out_min_eigenvalue) {
  return Guard([&] {
    const auto r = hypocert::IsSemiDissipative(Matrix(b), Tol(tol));
    if (out_flag) *out_flag = r.semi_dissipative ? 1 : 0;
    if (out_min_eigenvalue) *out_min_eigenvalue = r.certificate.min_eigenvalue;
  });
}

hypocert_status hypocert_is_hypocoercive(const hypocert_matrix* b, double tol,
                                         int* out_flag,
                                         double* out_min_real_part) {
  return Guard([&] {
    const auto r = hypocert::IsHypocoercive(Matrix(b), Tol(tol));
    if (out_flag) *out_flag = r.hypocoercive ? 1 : 0;
    if (out_min_real_part) *out_min_real_part = r.min_real_part;
  });
}

hypocert_status hypocert_hc_index(const hypocert_matrix* b, double tol, int cap,
                                  int* out_index, double* out_kappa) {
  return Guard([&] {
    const auto r = hypocert::HcIndex(Matrix(b), Tol(tol), Cap(cap));
    if (out_index) *out_index = IndexOrNone(r);
    if (out_kappa) *out_kappa = r.witness_kappa;
  });
}

hypocert_status hypocert_coercivity_bounds(const hypocert_matrix* b,
                                           double* out_mu,
                                           double* out_lambda_upper) {
  return Guard([&] {
    const auto r = hypocert::ComputeCoercivityBounds(Matrix(b));
    if (out_mu) *out_mu = r.mu;
    if (out_lambda_upper) *out_lambda_upper = r.lambda_upper;
  });
}

hypocert_status hypocert_theta_operator(const hypocert_matrix* b, double theta,
                                        double tau, hypocert_matrix** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    auto d = hypocert::ThetaOperator(Matrix(b), hypocert::ThetaScheme(theta, tau));
    *out = new hypocert_matrix{hypocert::MatrixDocument{std::move(d), {}}};
  });
}

hypocert_status hypocert_classify_contractivity(const hypocert_matrix* b,
                                                double theta, double tau,
                                                double tol, int* out_class,
                                                double* out_norm,
                                                double* out_form_min_eigenvalue) {
  return Guard([&] {
    const auto r = hypocert::ClassifyContractivity(
        Matrix(b), hypocert::ThetaScheme(theta, tau), Tol(tol));
    if (out_class) *out_class = static_cast<int>(r.classification);
    if (out_norm) *out_norm = r.norm;
    if (out_form_min_eigenvalue) *out_form_min_eigenvalue = r.form_min_eigenvalue;
  });
}

hypocert_status hypocert_is_hypocontractive(const hypocert_matrix* b,
                                            double theta, double tau,
                                            double tol, int* out_flag,
                                            double* out_spectral_radius) {
  return Guard([&] {
    const auto r = hypocert::IsHypocontractive(
        Matrix(b), hypocert::ThetaScheme(theta, tau), Tol(tol));
    if (out_flag) *out_flag = r.hypocontractive ? 1 : 0;
    if (out_spectral_radius) *out_spectral_radius = r.spectral_radius;
  });
}

hypocert_status hypocert_dhc_index(const hypocert_matrix* b, double theta,
                                   double tau, double tol, int cap,
                                   int* out_index, double* out_kappa) {
  return Guard([&] {
    const auto r = hypocert::DhcIndex(Matrix(b), hypocert::ThetaScheme(theta, tau),
                                      Tol(tol), Cap(cap));
    if (out_index) *out_index = IndexOrNone(r);
    if (out_kappa) *out_kappa = r.witness_kappa;
  });
}

hypocert_status hypocert_max_stepsize(const hypocert_matrix* b, double theta,
                                      double tol, int* out_kind,
                                      double* out_tau0) {
  return Guard([&] {
    hypocert::StepSizeOptions options;
    options.tolerance = Tol(tol);
    const auto w = hypocert::MaxStepsize(Matrix(b), theta, options);
    if (out_kind) *out_kind = static_cast<int>(w.kind);
    if (out_tau0) *out_tau0 = w.tau0;
  });
}

hypocert_status hypocert_fit_short_time_exponent(const hypocert_matrix* b,
                                                 double t_min, double t_max,
                                                 int samples, double* out_a,
                                                 double* out_c,
                                                 double* out_r_squared) {
  return Guard([&] {
    const auto fit =
        hypocert::FitShortTimeExponent(Matrix(b), t_min, t_max, samples);
    if (out_a) *out_a = fit.a_hat;
    if (out_c) *out_c = fit.c_hat;
    if (out_r_squared) *out_r_squared = fit.r_squared;
  });
}

hypocert_status hypocert_first_contraction_index(const hypocert_matrix* b,
                                                 double theta, double tau,
                                                 int k_max, double tol,
                                                 int* out_index) {
  return Guard([&] {
    const auto curve = hypocert::DiscreteNormSequence(
        Matrix(b), hypocert::ThetaScheme(theta, tau), k_max);
    const auto first = hypocert::FirstContractionIndex(curve, tol < 0 ? 1e-9 : tol);
    if (out_index) *out_index = first ? *first : HYPOCERT_INDEX_NONE;
  });
}

hypocert_status hypocert_analyze(const hypocert_matrix* b, const double* thetas,
                                 size_t n_thetas, const double* taus,
                                 size_t n_taus, const hypocert_options* options,
                                 hypocert_format format, char** out_report,
                                 int* out_exit_code) {
  return Guard([&] {
    RequireNonNull(b, "matrix handle");
    RequireNonNull(out_report, "out_report");
    if (n_thetas > 0) RequireNonNull(thetas, "thetas");
    if (n_taus > 0) RequireNonNull(taus, "taus");
    hypocert::AnalysisOptions opts;
    if (options != nullptr) {
      opts.tolerance = Tol(options->tol);
      opts.cap = Cap(options->cap);
      opts.contractivity_tolerance = Tol(options->contractivity_tol);
      if (options->plateau_tol >= 0.0) opts.plateau_tolerance = options->plateau_tol;
    }
    const auto report = hypocert::RunAnalyze(
        b->doc, std::vector<double>(thetas, thetas + n_thetas),
        std::vector<double>(taus, taus + n_taus), opts);
    const std::string text = Format(format) == hypocert::OutputFormat::kJson
                                 ? hypocert::ReportToJson(report)
                                 : hypocert::ReportToCsv(report);
    *out_report = CopyString(text);
    if (out_exit_code) *out_exit_code = hypocert::ReportExitCode(report);
  });
}

hypocert_status hypocert_sweep(const hypocert_matrix* b, double theta,
                               double tau_lo, double tau_hi, int n, double tol,
                               hypocert_format format, char** out_table,
                               int* out_exit_code) {
  return Guard([&] {
    RequireNonNull(out_table, "out_table");
    const auto sweep =
        hypocert::RunSweep(Matrix(b), theta, tau_lo, tau_hi, n, Tol(tol));
    *out_table = CopyString(Format(format) == hypocert::OutputFormat::kJson
                                ? hypocert::SweepToJson(sweep)
                                : hypocert::SweepToCsv(sweep));
    if (out_exit_code) *out_exit_code = hypocert::SweepExitCode(sweep);
  });
}

hypocert_status hypocert_curve_continuous(const hypocert_matrix* b,
                                          double t_min, double t_max,
                                          int samples, hypocert_format format,
                                          char** out_table) {
  return Guard([&] {
    RequireNonNull(out_table, "out_table");
    const auto r = hypocert::RunContinuousCurve(
        Matrix(b), hypocert::LogSpace(t_min, t_max, samples));
    *out_table = CopyString(Format(format) == hypocert::OutputFormat::kJson
                                ? hypocert::CurveToJson(r)
                                : hypocert::CurveToCsv(r));
  });
}

hypocert_status hypocert_curve_discrete(const hypocert_matrix* b, double theta,
                                        double tau, int k_max, double tol,
                                        hypocert_format format,
                                        char** out_table) {
  return Guard([&] {
    RequireNonNull(out_table, "out_table");
    const auto r = hypocert::RunDiscreteCurve(
        Matrix(b), hypocert::ThetaScheme(theta, tau), k_max,
        tol < 0.0 ? 1e-9 : tol);
    *out_table = CopyString(Format(format) == hypocert::OutputFormat::kJson
                                ? hypocert::CurveToJson(r)
                                : hypocert::CurveToCsv(r));
  });
}

hypocert_status hypocert_write_file(const char* path, const char* content) {
  return Guard([&] {
    RequireNonNull(path, "path");
    RequireNonNull(content, "content");
    hypocert::WriteFileAtomic(path, content);
  });
}

}  // extern "C"
