#include "otk/error.hpp"

namespace otk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::NotAbsolutelyContinuous: return "NotAbsolutelyContinuous";
    case ErrorCode::InvalidCost: return "InvalidCost";
    case ErrorCode::UnsupportedCost: return "UnsupportedCost";
    case ErrorCode::EmptyRestriction: return "EmptyRestriction";
    case ErrorCode::InvalidWeight: return "InvalidWeight";
    case ErrorCode::MassImbalance: return "MassImbalance";
    case ErrorCode::EmptyMeasure: return "EmptyMeasure";
    case ErrorCode::OracleOverflow: return "OracleOverflow";
    case ErrorCode::CertificateOverflow: return "CertificateOverflow";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::QuantileRange: return "QuantileRange";
    case ErrorCode::InvalidCut: return "InvalidCut";
    case ErrorCode::EmptySignature: return "EmptySignature";
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace otk
