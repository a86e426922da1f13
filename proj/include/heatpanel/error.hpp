#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heatpanel {

enum class ErrorCode {
  // panel ingestion
  MalformedCsv,
  DuplicateCell,
  IncompletePanel,
  NonFiniteValue,
  UnknownRegion,
  UnknownVariable,
  // trend / correlation
  DegenerateTime,
  TooShort,
  EmptyInput,
  LengthMismatch,
  TimeMisalignment,
  ZeroVariance,
  // hypothesis test
  InvalidSamples,
  SingularCovariance,
  InsufficientSamples,
  DegenerateGrouping,
  // numerics
  NotPositiveDefinite,
  DomainError,
  NoConvergence,
  // breaks
  TooFewDistinct,
  BadK,
  NonFinite,
  UnsortedBoundaries,
  // driver
  BadAlpha,
  BadConfig,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for errors caused by bad input data or configuration, as opposed to
/// failures that happen while computing on otherwise valid input.
bool is_input_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// Message without the "[Code] " prefix carried by what().
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace heatpanel
