#pragma once

#include <stdexcept>
#include <string>

namespace subharmonic {

/// Failure categories shared by every module. Values are stable: the C API
/// returns them verbatim as status codes.
enum class ErrorCode : int {
  InvalidArgument = 1,
  PoleAtResonance = 2,
  NonPositiveEnergy = 3,
  OverdampedRegime = 4,
  NotCoprime = 5,
  StepSizeUnderflow = 6,
  NoConvergence = 7,
  SingularJacobian = 8,
  AmbiguousWinding = 9,
  Escaped = 10,
  DimensionTooSmall = 11,
  UnitarityLoss = 12,
  TruncationUnsafe = 13,
  NoCatManifold = 14,
  InsufficientSampling = 15,
  NoKernel = 16,
  MarginalStability = 17,
  NoDissipation = 18,
  DeltaBarOutOfRange = 19,
  NoRoot = 20,
  ConfigError = 21,
  IoError = 22,
  PartialFailure = 23,
  Internal = 99,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace subharmonic
