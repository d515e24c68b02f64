#pragma once

#include <stdexcept>
#include <string>

namespace hypocert {

// Categories of failure. The numeric values mirror hypocert_status in the C
// API so the boundary translation is a plain cast.
enum class ErrorCode {
  kInvalidArgument = 1,
  kParse = 2,
  kNotHermitian = 3,
  kNotInvertible = 4,
  kSchemeInapplicable = 5,
  kPrecondition = 6,
  kNoDecay = 7,
  kNumerical = 8,
  kIo = 9,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hypocert
