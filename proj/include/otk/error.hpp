#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace otk {

enum class ErrorCode {
  InvalidMeasure,
  NotAbsolutelyContinuous,
  InvalidCost,
  UnsupportedCost,
  EmptyRestriction,
  InvalidWeight,
  MassImbalance,
  EmptyMeasure,
  OracleOverflow,
  CertificateOverflow,
  DimensionError,
  QuantileRange,
  InvalidCut,
  EmptySignature,
  NotConnected,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

  /// True for codes that describe bad input files rather than a failed
  /// mathematical precondition.
  bool is_io() const noexcept {
    return code_ == ErrorCode::ParseError || code_ == ErrorCode::IoError;
  }

 private:
  ErrorCode code_;
};

}  // namespace otk
