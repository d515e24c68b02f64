#include "hypocert/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json_writer.hpp"

namespace hypocert {

namespace {

using Json = nlohmann::ordered_json;

EntryError ToEntryError(const Error& e) { return EntryError{e.code(), e.what()}; }

template <typename F>
std::optional<EntryError> Capture(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return ToEntryError(e);
  } catch (const std::exception& e) {
    return EntryError{ErrorCode::kNumerical, e.what()};
  }
  return std::nullopt;
}

Json ErrorJson(const EntryError& e) {
  Json j;
  j["code"] = ErrorCodeName(e.code);
  j["message"] = e.message;
  return j;
}

Json DoubleArray(const std::vector<double>& values) {
  Json a = Json::array();
  for (double v : values) a.push_back(v);
  return a;
}

Json CertificateJson(const HermitianCertificate& c) {
  Json j;
  j["classification"] = HermitianClassName(c.classification);
  j["min_eigenvalue"] = c.min_eigenvalue;
  j["tolerance_used"] = c.tolerance_used;
  j["marginal"] = c.marginal;
  return j;
}

Json IndexJson(const IndexResult& r) {
  Json j;
  j["index"] = r.index ? Json(*r.index) : Json(nullptr);
  j["witness_kappa"] = r.index ? Json(r.witness_kappa) : Json(nullptr);
  j["search_cap"] = r.search_cap;
  j["partial_min_eigenvalues"] = DoubleArray(r.partial_min_eigenvalues);
  j["tolerance_used"] = r.tolerance_used;
  j["marginal"] = r.marginal;
  return j;
}

Json ContractivityJson(const ContractivityClass& c) {
  Json j;
  j["class"] = ContractivityName(c.classification);
  j["norm"] = c.norm;
  j["form_min_eigenvalue"] = c.form_min_eigenvalue;
  j["norm_route"] = ContractivityName(c.norm_route);
  j["form_route"] = ContractivityName(c.form_route);
  j["routes_agree"] = c.routes_agree;
  j["norm_tolerance"] = c.norm_tolerance;
  j["form_tolerance"] = c.form_tolerance;
  j["marginal"] = c.marginal;
  return j;
}

Json WindowJson(const StepSizeWindow& w) {
  Json j;
  j["window"] = StepSizeWindowKindName(w.kind);
  if (w.kind == StepSizeWindowKind::kBounded) {
    j["tau0"] = w.tau0;
    j["norm_at_tau0"] = w.norm_at_tau0;
    j["norm_at_1.01_tau0"] = w.norm_past_tau0;
  }
  if (!w.reason.empty()) j["reason"] = w.reason;
  j["marginal"] = w.marginal;
  return j;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

SchemeResult AnalyzeScheme(const OperatorMatrix& b, double theta, double tau,
                           const AnalysisOptions& options) {
  SchemeResult r;
  r.theta = theta;
  r.tau = tau;
  r.error = Capture([&] {
    const ThetaScheme scheme(theta, tau);
    const OperatorMatrix d = ThetaOperator(b, scheme);
    r.contractivity =
        ClassifyContractivity(b, scheme, options.contractivity_tolerance);
    r.hypocontractivity = IsHypocontractive(b, scheme);
    try {
      r.dhc_index = DhcIndexOfIteration(d, options.tolerance, options.cap);
      r.dhc_status = "ok";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPrecondition) throw;
      r.dhc_status = "not semi-contractive";
    }
    const int cap = options.cap.value_or(static_cast<int>(b.dim()) - 1);
    r.plateau_k_max = cap + 2;
    const NormCurve powers = DiscreteNormSequence(d, r.plateau_k_max);
    r.first_contraction_index =
        FirstContractionIndex(powers, options.plateau_tolerance);
    if (r.dhc_index && r.dhc_index->index && r.first_contraction_index) {
      r.plateau_consistent =
          *r.first_contraction_index == *r.dhc_index->index + 1;
    }
  });
  return r;
}

WindowResult AnalyzeWindow(const OperatorMatrix& b, double theta,
                           const SemiDissipativity& sd,
                           const AnalysisOptions& options) {
  WindowResult w;
  w.theta = theta;
  w.error = Capture([&] {
    if (!(theta >= 0.0 && theta <= 1.0)) {
      std::ostringstream os;
      os << "theta = " << theta << " is outside [0, 1]";
      throw Error(ErrorCode::kInvalidArgument, os.str());
    }
    if (theta < 0.5) {
      w.source = "max_stepsize";
      StepSizeOptions so;
      so.tolerance = options.tolerance;
      so.verification_tolerance = options.step_size_verification_tolerance;
      w.window = MaxStepsize(b, theta, so);
      return;
    }
    // theta >= 1/2: the contractivity form is 2 tau B_H + tau^2 (2 theta - 1)
    // B^*B, nonnegative for every tau exactly when B_H >= 0.
    w.source = "semi-dissipativity";
    StepSizeWindow window;
    window.marginal = sd.certificate.marginal;
    if (sd.semi_dissipative) {
      window.kind = StepSizeWindowKind::kAllTau;
    } else {
      throw Error(ErrorCode::kPrecondition,
                  "B is not semi-dissipative; the window for theta >= 1/2 is "
                  "not of the form (0, tau0]");
    }
    w.window = window;
  });
  return w;
}

}  // namespace

AnalysisReport RunAnalyze(const MatrixDocument& input,
                          const std::vector<double>& thetas,
                          const std::vector<double>& taus,
                          const AnalysisOptions& options) {
  if (thetas.empty() || taus.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "analyze: theta and tau lists must be nonempty");
  }
  // Bad scheme parameters are input errors, not per-entry failures.
  for (double theta : thetas) {
    for (double tau : taus) ThetaScheme(theta, tau);
  }
  AnalysisReport report{input, thetas, taus, options, {}, {}, {}, {}, 0.0, {}, {}, false};
  const OperatorMatrix& b = input.matrix;
  report.semi_dissipative = IsSemiDissipative(b, options.tolerance);
  report.hypocoercive = IsHypocoercive(b);
  report.decay_rate = SpectralAbscissaDecayRate(b);
  if (report.semi_dissipative.semi_dissipative) {
    report.hc_index = HcIndex(b, options.tolerance, options.cap);
    report.hc_status = "ok";
  } else {
    report.hc_status = "not semi-dissipative";
  }
  for (double theta : thetas) {
    for (double tau : taus) {
      report.schemes.push_back(AnalyzeScheme(b, theta, tau, options));
    }
  }
  for (double theta : thetas) {
    report.step_size_windows.push_back(
        AnalyzeWindow(b, theta, report.semi_dissipative, options));
  }

  bool marginal = report.semi_dissipative.certificate.marginal ||
                  report.hypocoercive.marginal ||
                  (report.hc_index && report.hc_index->marginal);
  for (const auto& s : report.schemes) {
    marginal = marginal || (s.contractivity && s.contractivity->marginal) ||
               (s.hypocontractivity && s.hypocontractivity->marginal) ||
               (s.dhc_index && s.dhc_index->marginal) || !s.plateau_consistent;
  }
  for (const auto& w : report.step_size_windows) {
    marginal = marginal || (w.window && w.window->marginal);
  }
  report.marginal = marginal;
  return report;
}

std::string ReportToJson(const AnalysisReport& r) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = kToolVersion;

  Json input;
  input["dim"] = r.input.matrix.dim();
  input["label"] = r.input.label ? Json(*r.input.label) : Json(nullptr);
  Json entries = Json::array();
  const ComplexMatrix& m = r.input.matrix.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      entries.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    }
  }
  input["entries"] = std::move(entries);
  input["thetas"] = DoubleArray(r.thetas);
  input["taus"] = DoubleArray(r.taus);
  j["input"] = std::move(input);

  Json tol;
  tol["hermitian"] = r.options.tolerance
                         ? Json(*r.options.tolerance)
                         : Json("default: max(dim,4)*eps*||H||");
  tol["spectral"] = "default: sqrt(eps)*max(1,||M||)";
  tol["contractivity"] = r.options.contractivity_tolerance
                             ? Json(*r.options.contractivity_tolerance)
                             : Json("default: max(dim,4)*eps (relative)");
  tol["plateau"] = r.options.plateau_tolerance;
  tol["step_size_verification"] = r.options.step_size_verification_tolerance;
  tol["cap"] = r.options.cap ? Json(*r.options.cap)
                             : Json(static_cast<int>(r.input.matrix.dim()) - 1);
  j["tolerances"] = std::move(tol);

  Json sd;
  sd["value"] = r.semi_dissipative.semi_dissipative;
  sd["certificate"] = CertificateJson(r.semi_dissipative.certificate);
  j["semi_dissipative"] = std::move(sd);

  Json hc;
  hc["value"] = r.hypocoercive.hypocoercive;
  hc["min_real_part"] = r.hypocoercive.min_real_part;
  hc["tolerance_used"] = r.hypocoercive.tolerance_used;
  hc["marginal"] = r.hypocoercive.marginal;
  j["hypocoercive"] = std::move(hc);

  Json idx;
  idx["status"] = r.hc_status;
  if (r.hc_index) {
    const Json body = IndexJson(*r.hc_index);
    for (const auto& item : body.items()) idx[item.key()] = item.value();
  }
  j["hc_index"] = std::move(idx);
  j["decay_rate"] = r.decay_rate;

  Json schemes = Json::array();
  for (const auto& s : r.schemes) {
    Json e;
    e["theta"] = s.theta;
    e["tau"] = s.tau;
    if (s.error) {
      e["error"] = ErrorJson(*s.error);
      schemes.push_back(std::move(e));
      continue;
    }
    e["contractivity"] = ContractivityJson(*s.contractivity);
    Json hcon;
    hcon["value"] = s.hypocontractivity->hypocontractive;
    hcon["spectral_radius"] = s.hypocontractivity->spectral_radius;
    hcon["tolerance_used"] = s.hypocontractivity->tolerance_used;
    hcon["marginal"] = s.hypocontractivity->marginal;
    e["hypocontractive"] = std::move(hcon);
    Json dhc;
    dhc["status"] = s.dhc_status;
    if (s.dhc_index) {
      const Json body = IndexJson(*s.dhc_index);
      for (const auto& item : body.items()) dhc[item.key()] = item.value();
    }
    e["dhc_index"] = std::move(dhc);
    Json plateau;
    plateau["first_contraction_index"] =
        s.first_contraction_index ? Json(*s.first_contraction_index)
                                  : Json(nullptr);
    plateau["k_max"] = s.plateau_k_max;
    plateau["consistent_with_dhc_index"] = s.plateau_consistent;
    e["plateau"] = std::move(plateau);
    schemes.push_back(std::move(e));
  }
  j["schemes"] = std::move(schemes);

  Json windows = Json::object();
  for (const auto& w : r.step_size_windows) {
    Json e;
    e["theta"] = w.theta;
    e["source"] = w.source;
    if (w.error) {
      e["error"] = ErrorJson(*w.error);
    } else {
      const Json body = WindowJson(*w.window);
      for (const auto& item : body.items()) e[item.key()] = item.value();
    }
    windows[FormatDouble(w.theta)] = std::move(e);
  }
  j["step_size_windows"] = std::move(windows);
  j["marginal"] = r.marginal;
  j["exit_code"] = ReportExitCode(r);
  return detail::DumpJson(j);
}

std::string ReportToCsv(const AnalysisReport& r) {
  std::ostringstream os;
  os << "theta,tau,class,norm_D,form_min_eigenvalue,hypocontractive,"
        "spectral_radius,dhc_index,first_contraction_index,marginal,error\n";
  for (const auto& s : r.schemes) {
    os << FormatDouble(s.theta) << ',' << FormatDouble(s.tau) << ',';
    if (s.error) {
      os << "error,,,,,,,," << CsvField(s.error->message) << '\n';
      continue;
    }
    const auto& c = *s.contractivity;
    os << ContractivityName(c.classification) << ',' << FormatDouble(c.norm)
       << ',' << FormatDouble(c.form_min_eigenvalue) << ','
       << (s.hypocontractivity->hypocontractive ? "true" : "false") << ','
       << FormatDouble(s.hypocontractivity->spectral_radius) << ',';
    if (s.dhc_index && s.dhc_index->index) {
      os << *s.dhc_index->index;
    } else {
      os << (s.dhc_index ? "none" : "n/a");
    }
    os << ',';
    if (s.first_contraction_index) {
      os << *s.first_contraction_index;
    } else {
      os << "none";
    }
    os << ',' << (c.marginal ? "true" : "false") << ",\n";
  }
  return os.str();
}

int ReportExitCode(const AnalysisReport& r) {
  bool inapplicable = false;
  bool other = false;
  auto note = [&](const std::optional<EntryError>& e) {
    if (!e) return;
    if (e->code == ErrorCode::kSchemeInapplicable) {
      inapplicable = true;
    } else if (e->code != ErrorCode::kPrecondition) {
      // Precondition failures are domain outcomes (e.g. no window for a
      // non-hypocoercive B), not failures of the run.
      other = true;
    }
  };
  for (const auto& s : r.schemes) note(s.error);
  for (const auto& w : r.step_size_windows) note(w.error);
  if (other) return kExitNumericalFailure;
  if (inapplicable) return kExitSchemeInapplicable;
  return kExitSuccess;
}

SweepResult RunSweep(const OperatorMatrix& b, double theta, double lo,
                     double hi, int n, std::optional<double> tolerance) {
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "sweep: n must be >= 2");
  }
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sweep: theta must lie in [0, 1]");
  }
  SweepResult sweep;
  sweep.theta = theta;
  for (double tau : LogSpace(lo, hi, n)) {
    SweepRow row;
    row.tau = tau;
    row.error = Capture([&] {
      row.contractivity = ClassifyContractivity(b, ThetaScheme(theta, tau), tolerance);
    });
    sweep.rows.push_back(std::move(row));
  }
  return sweep;
}

std::string SweepToCsv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "tau,norm_D,class,form_min_eigenvalue\n";
  for (const auto& row : sweep.rows) {
    os << FormatDouble(row.tau) << ',';
    if (row.contractivity) {
      os << FormatDouble(row.contractivity->norm) << ','
         << ContractivityName(row.contractivity->classification) << ','
         << FormatDouble(row.contractivity->form_min_eigenvalue) << '\n';
    } else {
      os << "nan," << ErrorCodeName(row.error->code) << ",nan\n";
    }
  }
  return os.str();
}

std::string SweepToJson(const SweepResult& sweep) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["theta"] = sweep.theta;
  Json rows = Json::array();
  for (const auto& row : sweep.rows) {
    Json e;
    e["tau"] = row.tau;
    if (row.contractivity) {
      e["norm_D"] = row.contractivity->norm;
      e["class"] = ContractivityName(row.contractivity->classification);
      e["form_min_eigenvalue"] = row.contractivity->form_min_eigenvalue;
      e["marginal"] = row.contractivity->marginal;
    } else {
      e["error"] = ErrorJson(*row.error);
    }
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  return detail::DumpJson(j);
}

int SweepExitCode(const SweepResult& sweep) {
  int code = kExitSuccess;
  for (const auto& row : sweep.rows) {
    if (!row.error) continue;
    if (row.error->code != ErrorCode::kSchemeInapplicable) {
      return kExitNumericalFailure;
    }
    code = kExitSchemeInapplicable;
  }
  return code;
}

ContinuousCurveResult RunContinuousCurve(const OperatorMatrix& b,
                                         const std::vector<double>& t_grid) {
  ContinuousCurveResult result;
  result.curve = PropagatorNormCurve(b, t_grid);
  try {
    result.fit = FitShortTimeExponent(result.curve);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoDecay && e.code() != ErrorCode::kPrecondition) {
      throw;
    }
    result.fit_error = ToEntryError(e);
  }
  return result;
}

DiscreteCurveResult RunDiscreteCurve(const OperatorMatrix& b,
                                     const ThetaScheme& scheme, int k_max,
                                     double plateau_tolerance) {
  DiscreteCurveResult result;
  result.theta = scheme.theta();
  result.tau = scheme.tau();
  result.plateau_tolerance = plateau_tolerance;
  result.curve = DiscreteNormSequence(b, scheme, k_max);
  result.first_contraction_index =
      FirstContractionIndex(result.curve, plateau_tolerance);
  return result;
}

std::string CurveToCsv(const ContinuousCurveResult& r) {
  std::ostringstream os;
  os << "t,norm\n";
  for (std::size_t i = 0; i < r.curve.abscissae.size(); ++i) {
    os << FormatDouble(r.curve.abscissae[i]) << ','
       << FormatDouble(r.curve.values[i]) << '\n';
  }
  if (r.fit) {
    os << "# fit a_hat=" << FormatDouble(r.fit->a_hat)
       << " c_hat=" << FormatDouble(r.fit->c_hat)
       << " r_squared=" << FormatDouble(r.fit->r_squared)
       << " t_min=" << FormatDouble(r.fit->fit_window.first)
       << " t_max=" << FormatDouble(r.fit->fit_window.second)
       << " points=" << r.fit->points << '\n';
  } else if (r.fit_error) {
    os << "# fit " << (r.fit_error->code == ErrorCode::kNoDecay
                           ? "no decay detected"
                           : r.fit_error->message)
       << '\n';
  }
  return os.str();
}

std::string CurveToCsv(const DiscreteCurveResult& r) {
  std::ostringstream os;
  os << "k,norm\n";
  for (std::size_t i = 0; i < r.curve.abscissae.size(); ++i) {
    os << static_cast<long long>(r.curve.abscissae[i]) << ','
       << FormatDouble(r.curve.values[i]) << '\n';
  }
  os << "# first_contraction_index="
     << (r.first_contraction_index ? std::to_string(*r.first_contraction_index)
                                   : std::string("none"))
     << " tolerance=" << FormatDouble(r.plateau_tolerance)
     << " theta=" << FormatDouble(r.theta) << " tau=" << FormatDouble(r.tau)
     << '\n';
  return os.str();
}

std::string CurveToJson(const ContinuousCurveResult& r) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "continuous";
  j["t"] = DoubleArray(r.curve.abscissae);
  j["norm"] = DoubleArray(r.curve.values);
  if (r.fit) {
    Json f;
    f["a_hat"] = r.fit->a_hat;
    f["c_hat"] = r.fit->c_hat;
    f["r_squared"] = r.fit->r_squared;
    f["fit_window"] = Json::array({r.fit->fit_window.first, r.fit->fit_window.second});
    f["points"] = r.fit->points;
    j["fit"] = std::move(f);
  } else if (r.fit_error) {
    Json f;
    f["error"] = ErrorJson(*r.fit_error);
    j["fit"] = std::move(f);
  }
  return detail::DumpJson(j);
}

std::string CurveToJson(const DiscreteCurveResult& r) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "discrete";
  j["theta"] = r.theta;
  j["tau"] = r.tau;
  Json ks = Json::array();
  for (double k : r.curve.abscissae) ks.push_back(static_cast<long long>(k));
  j["k"] = std::move(ks);
  j["norm"] = DoubleArray(r.curve.values);
  j["first_contraction_index"] = r.first_contraction_index
                                     ? Json(*r.first_contraction_index)
                                     : Json(nullptr);
  j["plateau_tolerance"] = r.plateau_tolerance;
  return detail::DumpJson(j);
}

}  // namespace hypocert
