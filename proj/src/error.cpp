#include "heatpanel/error.hpp"

namespace heatpanel {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::DuplicateCell: return "DuplicateCell";
    case ErrorCode::IncompletePanel: return "IncompletePanel";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::UnknownRegion: return "UnknownRegion";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::DegenerateTime: return "DegenerateTime";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TimeMisalignment: return "TimeMisalignment";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::InvalidSamples: return "InvalidSamples";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::DegenerateGrouping: return "DegenerateGrouping";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::TooFewDistinct: return "TooFewDistinct";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::UnsortedBoundaries: return "UnsortedBoundaries";
    case ErrorCode::BadAlpha: return "BadAlpha";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedCsv:
    case ErrorCode::DuplicateCell:
    case ErrorCode::IncompletePanel:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::UnknownRegion:
    case ErrorCode::UnknownVariable:
    case ErrorCode::BadAlpha:
    case ErrorCode::BadConfig:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error("[" + std::string(to_string(code)) + "] " + message),
      code_(code),
      detail_(message) {}

}  // namespace heatpanel
