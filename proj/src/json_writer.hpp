#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace hypocert::detail {

// Deterministic pretty printer: keys keep insertion order, floating-point
// numbers use 17 significant digits, non-finite numbers become null.
std::string DumpJson(const nlohmann::ordered_json& value, int indent = 2);

}  // namespace hypocert::detail
