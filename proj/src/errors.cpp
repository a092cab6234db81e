#include "bergtoep/errors.hpp"

namespace bergtoep {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::SingularSymbol: return "SingularSymbol";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NonRealTrace: return "NonRealTrace";
    case ErrorCode::BufferTooSmall: return "BufferTooSmall";
    case ErrorCode::SeriesSlowConvergence: return "SeriesSlowConvergence";
    case ErrorCode::QuadratureUnderResolved: return "QuadratureUnderResolved";
    case ErrorCode::ComputeBudget: return "ComputeBudget";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::TouchesBoundary: return "TouchesBoundary";
    case ErrorCode::DivergenceSuspected: return "DivergenceSuspected";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::ThresholdTooLow: return "ThresholdTooLow";
    case ErrorCode::DepthExhausted: return "DepthExhausted";
    case ErrorCode::NotSubset: return "NotSubset";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RangeError: return "RangeError";
  }
  return "Unknown";
}

}  // namespace bergtoep
