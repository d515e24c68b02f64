// Command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hypocert/hypocert.h"

namespace {

constexpr int kExitInputError = 2;
constexpr int kExitSchemeInapplicable = 3;
constexpr int kExitNumericalFailure = 4;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MatrixDeleter {
  void operator()(hypocert_matrix* m) const { hypocert_matrix_destroy(m); }
};
using MatrixHandle = std::unique_ptr<hypocert_matrix, MatrixDeleter>;

struct StringDeleter {
  void operator()(char* s) const { hypocert_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

int ExitCodeFor(hypocert_status status) {
  switch (status) {
    case HYPOCERT_OK: return 0;
    case HYPOCERT_E_INVALID_ARGUMENT:
    case HYPOCERT_E_PARSE:
    case HYPOCERT_E_IO:
    case HYPOCERT_E_PRECONDITION:
    case HYPOCERT_E_NOT_HERMITIAN:
      return kExitInputError;
    case HYPOCERT_E_SCHEME_INAPPLICABLE:
      return kExitSchemeInapplicable;
    default:
      return kExitNumericalFailure;
  }
}

// Throws the status through as an exit code after printing the message.
struct StatusError {
  hypocert_status status;
};

void Check(hypocert_status status) {
  if (status == HYPOCERT_OK) return;
  std::cerr << "hypocert: " << hypocert_status_string(status) << ": "
            << hypocert_last_error() << "\n";
  throw StatusError{status};
}

double ParseNumber(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InputError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw InputError("not a number: '" + text + "'");
  return value;
}

std::vector<std::string> Split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

std::vector<double> ParseList(const std::string& text) {
  std::vector<double> values;
  for (const auto& part : Split(text, ',')) values.push_back(ParseNumber(part));
  if (values.empty()) throw InputError("empty list");
  return values;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
};

// lo:hi:n, log-spaced.
Range ParseRange(const std::string& text) {
  const auto parts = Split(text, ':');
  if (parts.size() != 3) {
    throw InputError("expected a range lo:hi:n, got '" + text + "'");
  }
  Range r{ParseNumber(parts[0]), ParseNumber(parts[1]), 0};
  const double n = ParseNumber(parts[2]);
  if (n != static_cast<int>(n)) throw InputError("range count must be an integer");
  r.n = static_cast<int>(n);
  return r;
}

std::vector<double> LogSpace(const Range& r) {
  if (!(r.lo > 0.0) || !(r.hi > r.lo) || r.n < 2) {
    throw InputError("range needs 0 < lo < hi and n >= 2");
  }
  std::vector<double> grid;
  for (int i = 0; i < r.n; ++i) {
    grid.push_back(r.lo * std::pow(r.hi / r.lo, static_cast<double>(i) / (r.n - 1)));
  }
  grid.front() = r.lo;
  grid.back() = r.hi;
  return grid;
}

hypocert_format ParseFormat(const std::string& text) {
  if (text == "json") return HYPOCERT_FORMAT_JSON;
  if (text == "csv") return HYPOCERT_FORMAT_CSV;
  throw InputError("unknown format '" + text + "'");
}

MatrixHandle LoadMatrix(const std::string& path) {
  hypocert_matrix* raw = nullptr;
  Check(hypocert_matrix_load(path.c_str(), &raw));
  return MatrixHandle(raw);
}

void Emit(const std::string& out_path, const char* text) {
  if (out_path.empty()) {
    std::fputs(text, stdout);
    return;
  }
  Check(hypocert_write_file(out_path.c_str(), text));
}

struct CommonFlags {
  std::string matrix;
  std::string theta;
  std::string tau;
  double tol = HYPOCERT_DEFAULT_TOL;
  int cap = HYPOCERT_DEFAULT_CAP;
  std::string out;
  std::string format;
};

int RunAnalyze(const CommonFlags& f) {
  const MatrixHandle b = LoadMatrix(f.matrix);
  const std::vector<double> thetas = ParseList(f.theta.empty() ? "0,0.5,1" : f.theta);
  std::vector<double> taus;
  if (f.tau.empty()) {
    taus = {1.0};
  } else if (f.tau.find(':') != std::string::npos) {
    taus = LogSpace(ParseRange(f.tau));
  } else {
    taus = ParseList(f.tau);
  }
  hypocert_options options;
  hypocert_options_init(&options);
  options.tol = f.tol;
  options.cap = f.cap;
  char* raw = nullptr;
  int exit_code = 0;
  Check(hypocert_analyze(b.get(), thetas.data(), thetas.size(), taus.data(),
                         taus.size(), &options,
                         ParseFormat(f.format.empty() ? "json" : f.format), &raw,
                         &exit_code));
  OwnedString report(raw);
  Emit(f.out, report.get());
  return exit_code;
}

int RunSweep(const CommonFlags& f) {
  const MatrixHandle b = LoadMatrix(f.matrix);
  const std::vector<double> thetas = ParseList(f.theta.empty() ? "0" : f.theta);
  if (thetas.size() != 1) throw InputError("sweep takes a single --theta");
  if (f.tau.empty()) throw InputError("sweep requires --tau lo:hi:n");
  const Range range = ParseRange(f.tau);
  char* raw = nullptr;
  int exit_code = 0;
  Check(hypocert_sweep(b.get(), thetas[0], range.lo, range.hi, range.n, f.tol,
                       ParseFormat(f.format.empty() ? "csv" : f.format), &raw,
                       &exit_code));
  OwnedString table(raw);
  Emit(f.out, table.get());
  return exit_code;
}

int RunCurve(const CommonFlags& f, const std::string& mode,
             const std::string& grid, int k_max) {
  const MatrixHandle b = LoadMatrix(f.matrix);
  const hypocert_format format = ParseFormat(f.format.empty() ? "csv" : f.format);
  char* raw = nullptr;
  if (mode == "continuous") {
    const Range range = ParseRange(grid.empty() ? "1e-4:1e-2:50" : grid);
    Check(hypocert_curve_continuous(b.get(), range.lo, range.hi, range.n, format,
                                    &raw));
  } else if (mode == "discrete") {
    const auto thetas = ParseList(f.theta.empty() ? "0.5" : f.theta);
    const auto taus = ParseList(f.tau.empty() ? "1" : f.tau);
    if (thetas.size() != 1 || taus.size() != 1) {
      throw InputError("discrete curve takes a single --theta and --tau");
    }
    Check(hypocert_curve_discrete(b.get(), thetas[0], taus[0], k_max,
                                  f.tol, format, &raw));
  } else {
    throw InputError("unknown --mode '" + mode + "'");
  }
  OwnedString table(raw);
  Emit(f.out, table.get());
  return 0;
}

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--matrix", f.matrix, "Matrix document (JSON)")->required();
  cmd->add_option("--theta", f.theta, "Comma-separated theta values in [0, 1]");
  cmd->add_option("--tau", f.tau, "Comma-separated step sizes or lo:hi:n (log-spaced)");
  cmd->add_option("--tol", f.tol, "Tolerance override (negative: library default)");
  cmd->add_option("--cap", f.cap, "Index search cap (negative: dim - 1)");
  cmd->add_option("--out", f.out, "Output path (default: stdout)");
  cmd->add_option("--format", f.format, "json or csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypocoercivity and theta-scheme contractivity certificates"};
  app.set_version_flag("--version", std::string(hypocert_version()));
  app.require_subcommand(1);

  CommonFlags analyze_flags, sweep_flags, curve_flags;
  auto* analyze = app.add_subcommand("analyze", "Full report for one matrix");
  AddCommon(analyze, analyze_flags);
  auto* sweep = app.add_subcommand("sweep", "Contractivity over a tau grid");
  AddCommon(sweep, sweep_flags);
  auto* curve = app.add_subcommand("curve", "Propagator or iteration norm curve");
  AddCommon(curve, curve_flags);
  std::string mode = "continuous";
  std::string grid;
  int k_max = 10;
  curve->add_option("--mode", mode, "continuous or discrete");
  curve->add_option("--grid", grid, "t grid lo:hi:n for continuous mode");
  curve->add_option("--kmax", k_max, "Largest power for discrete mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (analyze->parsed()) return RunAnalyze(analyze_flags);
    if (sweep->parsed()) return RunSweep(sweep_flags);
    if (curve->parsed()) return RunCurve(curve_flags, mode, grid, k_max);
  } catch (const InputError& e) {
    std::cerr << "hypocert: input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const StatusError& e) {
    return ExitCodeFor(e.status);
  }
  return kExitInputError;
}
