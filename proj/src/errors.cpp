#include "subharmonic/errors.hpp"

namespace subharmonic {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PoleAtResonance: return "PoleAtResonance";
    case ErrorCode::NonPositiveEnergy: return "NonPositiveEnergy";
    case ErrorCode::OverdampedRegime: return "OverdampedRegime";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::AmbiguousWinding: return "AmbiguousWinding";
    case ErrorCode::Escaped: return "Escaped";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::UnitarityLoss: return "UnitarityLoss";
    case ErrorCode::TruncationUnsafe: return "TruncationUnsafe";
    case ErrorCode::NoCatManifold: return "NoCatManifold";
    case ErrorCode::InsufficientSampling: return "InsufficientSampling";
    case ErrorCode::NoKernel: return "NoKernel";
    case ErrorCode::MarginalStability: return "MarginalStability";
    case ErrorCode::NoDissipation: return "NoDissipation";
    case ErrorCode::DeltaBarOutOfRange: return "DeltaBarOutOfRange";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::PartialFailure: return "PartialFailure";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace subharmonic
