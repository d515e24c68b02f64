#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "hypocert/report.hpp"
#include "json_writer.hpp"

namespace hypocert {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void ParseFail(const std::string& message) {
  throw Error(ErrorCode::kParse, "matrix document: " + message);
}

double ReadNumber(const Json& value, std::size_t entry, const char* part) {
  if (!value.is_number()) {
    std::ostringstream os;
    os << "entries[" << entry << "]" << part << " is not a number";
    ParseFail(os.str());
  }
  const double x = value.get<double>();
  if (!std::isfinite(x)) {
    std::ostringstream os;
    os << "entries[" << entry << "]" << part << " is not finite";
    ParseFail(os.str());
  }
  return x;
}

void DumpTo(const Json& v, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        DumpTo(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : v) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        DumpTo(e, indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      out += std::isfinite(x) ? FormatDouble(x) : "null";
      return;
    }
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

namespace detail {

std::string DumpJson(const nlohmann::ordered_json& value, int indent) {
  std::string out;
  DumpTo(value, indent, 0, out);
  if (indent >= 0) out += '\n';
  return out;
}

}  // namespace detail

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  std::string s(buffer);
  // Keep a decimal marker so the value reads back as floating point.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

MatrixDocument ParseMatrixDocument(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::ostringstream os;
    os << "malformed syntax at byte " << e.byte << ": " << e.what();
    ParseFail(os.str());
  } catch (const Json::out_of_range& e) {
    // Literals such as 1e999 overflow to infinity.
    ParseFail(std::string("number is not finite: ") + e.what());
  }
  if (!doc.is_object()) ParseFail("top level must be an object");
  if (!doc.contains("dim")) ParseFail("missing field \"dim\"");
  if (!doc.contains("entries")) ParseFail("missing field \"entries\"");
  const Json& dim_value = doc["dim"];
  if (!dim_value.is_number_integer() || dim_value.get<long long>() < 1) {
    ParseFail("\"dim\" must be a positive integer");
  }
  const long long dim = dim_value.get<long long>();
  if (dim > kMaxDimension) {
    std::ostringstream os;
    os << "\"dim\" = " << dim << " exceeds the supported maximum "
       << kMaxDimension;
    ParseFail(os.str());
  }
  const Json& entries = doc["entries"];
  if (!entries.is_array()) ParseFail("\"entries\" must be an array");
  if (entries.size() != static_cast<std::size_t>(dim * dim)) {
    std::ostringstream os;
    os << "length mismatch: \"entries\" has " << entries.size()
       << " items, expected dim^2 = " << dim * dim;
    ParseFail(os.str());
  }
  ComplexMatrix m(dim, dim);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const Json& e = entries[k];
    Complex z;
    if (e.is_number()) {
      z = Complex(ReadNumber(e, k, ""), 0.0);
    } else if (e.is_array() && e.size() == 2) {
      z = Complex(ReadNumber(e[0], k, "[0]"), ReadNumber(e[1], k, "[1]"));
    } else {
      std::ostringstream os;
      os << "entries[" << k << "] must be a number or an [re, im] pair";
      ParseFail(os.str());
    }
    m(static_cast<Eigen::Index>(k / dim), static_cast<Eigen::Index>(k % dim)) = z;
  }
  std::optional<std::string> label;
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) ParseFail("\"label\" must be a string");
    label = doc["label"].get<std::string>();
  }
  return MatrixDocument{OperatorMatrix(std::move(m)), std::move(label)};
}

MatrixDocument LoadMatrixDocument(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open matrix file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseMatrixDocument(buffer.str());
}

std::string SerializeMatrixDocument(const MatrixDocument& doc) {
  Json out;
  out["dim"] = doc.matrix.dim();
  Json entries = Json::array();
  const ComplexMatrix& m = doc.matrix.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      entries.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    }
  }
  out["entries"] = std::move(entries);
  if (doc.label) out["label"] = *doc.label;
  return detail::DumpJson(out, -1) + "\n";
}

void WriteFileAtomic(const std::string& path, std::string_view content) {
  const std::string temp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIo, "cannot write '" + path + "': " +
                                      std::strerror(errno));
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::remove(temp.c_str());
      throw Error(ErrorCode::kIo, "write to '" + temp + "' failed");
    }
  }
  if (std::rename(temp.c_str(), path.c_str()) != 0) {
    const std::string reason = std::strerror(errno);
    std::remove(temp.c_str());
    throw Error(ErrorCode::kIo, "cannot rename onto '" + path + "': " + reason);
  }
}

}  // namespace hypocert
