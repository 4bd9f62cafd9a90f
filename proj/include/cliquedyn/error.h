#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cliquedyn {

enum class ErrorKind {
  kInvalidConfiguration,
  kInvalidArgument,
  kNumericalFailure,
  kCapacityExceeded,
  kPreconditionViolation,
  kInsufficientData,
  kUnsupportedRecordingMode,
  kSamplingFailure,
  kDegenerateEstimate,
};

std::string_view ErrorKindName(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void Fail(ErrorKind kind, const std::string& message);

inline void Require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) Fail(kind, message);
}

}  // namespace cliquedyn
