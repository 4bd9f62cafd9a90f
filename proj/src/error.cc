#include "cliquedyn/error.h"

namespace cliquedyn {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidConfiguration: return "invalid-configuration";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kNumericalFailure: return "numerical-failure";
    case ErrorKind::kCapacityExceeded: return "capacity-exceeded";
    case ErrorKind::kPreconditionViolation: return "precondition-violation";
    case ErrorKind::kInsufficientData: return "insufficient-data";
    case ErrorKind::kUnsupportedRecordingMode: return "unsupported-recording-mode";
    case ErrorKind::kSamplingFailure: return "sampling-failure";
    case ErrorKind::kDegenerateEstimate: return "degenerate-estimate";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
      kind_(kind) {}

void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace cliquedyn
