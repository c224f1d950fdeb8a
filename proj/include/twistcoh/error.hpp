#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twistcoh {

enum class ErrorCode {
  InvalidArgument,
  DuplicatePuncture,
  IntegerExponent,
  ResonantSum,
  VerticalAlignment,
  IndexOutOfRange,
  TiedRealParts,
  PointOnCut,
  PointIsPuncture,
  PathHitsPuncture,
  EmptyChain,
  RadiusTooLarge,
  BasepointOnCut,
  PathLeavesRegion,
  PoleOfGamma,
  NotRealOrdered,
  PointOutsideRegion,
  StencilLeavesRegion,
  ChamberCrossing,
  InvalidInput,
  IoFailure,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DuplicatePuncture: return "DuplicatePuncture";
    case ErrorCode::IntegerExponent: return "IntegerExponent";
    case ErrorCode::ResonantSum: return "ResonantSum";
    case ErrorCode::VerticalAlignment: return "VerticalAlignment";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::TiedRealParts: return "TiedRealParts";
    case ErrorCode::PointOnCut: return "PointOnCut";
    case ErrorCode::PointIsPuncture: return "PointIsPuncture";
    case ErrorCode::PathHitsPuncture: return "PathHitsPuncture";
    case ErrorCode::EmptyChain: return "EmptyChain";
    case ErrorCode::RadiusTooLarge: return "RadiusTooLarge";
    case ErrorCode::BasepointOnCut: return "BasepointOnCut";
    case ErrorCode::PathLeavesRegion: return "PathLeavesRegion";
    case ErrorCode::PoleOfGamma: return "PoleOfGamma";
    case ErrorCode::NotRealOrdered: return "NotRealOrdered";
    case ErrorCode::PointOutsideRegion: return "PointOutsideRegion";
    case ErrorCode::StencilLeavesRegion: return "StencilLeavesRegion";
    case ErrorCode::ChamberCrossing: return "ChamberCrossing";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Structured rejection carried by every failing operation in the toolkit.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace twistcoh
