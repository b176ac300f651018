#include "radxray/error.hpp"

namespace radxray {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::IdenticallyZeroDiscriminant: return "IdenticallyZeroDiscriminant";
    case ErrorKind::NonPositiveAxis: return "NonPositiveAxis";
    case ErrorKind::InvalidBody: return "InvalidBody";
    case ErrorKind::TangencySolveFailure: return "TangencySolveFailure";
    case ErrorKind::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::NonMorseSkipped: return "NonMorseSkipped";
    case ErrorKind::OddM: return "OddM";
    case ErrorKind::PrerequisiteFailed: return "PrerequisiteFailed";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::StartTooCloseToZ: return "StartTooCloseToZ";
    case ErrorKind::TrackingFailure: return "TrackingFailure";
    case ErrorKind::ZeroOnContour: return "ZeroOnContour";
    case ErrorKind::NonPositiveForm: return "NonPositiveForm";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace radxray
