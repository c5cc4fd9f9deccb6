#include "peerwheel/error.hpp"

namespace peerwheel {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::ZeroTotal: return "ZeroTotal";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::AttemptCapExceeded: return "AttemptCapExceeded";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidExpected: return "InvalidExpected";
    case ErrorCode::ZeroSample: return "ZeroSample";
    case ErrorCode::ImpossibleObservation: return "ImpossibleObservation";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "IoError";
  }
  return "Unknown";
}

}  // namespace peerwheel
