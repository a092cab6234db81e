#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace bergtoep {

enum class ErrorCode {
  NotPSD,
  SingularSymbol,
  NoConvergence,
  NonRealTrace,
  BufferTooSmall,
  SeriesSlowConvergence,
  QuadratureUnderResolved,
  ComputeBudget,
  BadIndex,
  TouchesBoundary,
  DivergenceSuspected,
  ZeroDenominator,
  ThresholdTooLow,
  DepthExhausted,
  NotSubset,
  ParseError,
  DimensionMismatch,
  RangeError,
};

const char* to_string(ErrorCode code);

// Base for every error raised by the library. The code is stable and is what
// the CLI serializes into reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

template <ErrorCode C>
class CodedError : public Error {
 public:
  explicit CodedError(const std::string& what) : Error(C, what) {}
};

using NotPsdError = CodedError<ErrorCode::NotPSD>;
using NoConvergenceError = CodedError<ErrorCode::NoConvergence>;
using NonRealTraceError = CodedError<ErrorCode::NonRealTrace>;
using BufferTooSmallError = CodedError<ErrorCode::BufferTooSmall>;
using SeriesSlowConvergenceError = CodedError<ErrorCode::SeriesSlowConvergence>;
using QuadratureUnderResolvedError = CodedError<ErrorCode::QuadratureUnderResolved>;
using ComputeBudgetError = CodedError<ErrorCode::ComputeBudget>;
using BadIndexError = CodedError<ErrorCode::BadIndex>;
using TouchesBoundaryError = CodedError<ErrorCode::TouchesBoundary>;
using DivergenceSuspectedError = CodedError<ErrorCode::DivergenceSuspected>;
using ZeroDenominatorError = CodedError<ErrorCode::ZeroDenominator>;
using ThresholdTooLowError = CodedError<ErrorCode::ThresholdTooLow>;
using NotSubsetError = CodedError<ErrorCode::NotSubset>;
using ParseError = CodedError<ErrorCode::ParseError>;
using DimensionMismatchError = CodedError<ErrorCode::DimensionMismatch>;
using RangeError = CodedError<ErrorCode::RangeError>;

// Raised when det F(z) is numerically zero at a sample point.
class SingularSymbolError : public Error {
 public:
  SingularSymbolError(std::complex<double> z, const std::string& what)
      : Error(ErrorCode::SingularSymbol, what), point_(z) {}

  std::complex<double> point() const noexcept { return point_; }

 private:
  std::complex<double> point_;
};

}  // namespace bergtoep
