#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace radxray {

enum class ErrorKind {
  InvalidArgument,
  NonConvergence,
  DegenerateInput,
  IdenticallyZeroDiscriminant,
  NonPositiveAxis,
  InvalidBody,
  TangencySolveFailure,
  QuadratureNonConvergence,
  InsufficientSamples,
  NonMorseSkipped,
  OddM,
  PrerequisiteFailed,
  DegenerateDirection,
  StartTooCloseToZ,
  TrackingFailure,
  ZeroOnContour,
  NonPositiveForm,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind so
/// front ends can map it to exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace radxray
