#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace peerwheel {

enum class ErrorCode {
  EmptyTable,
  ZeroTotal,
  OutOfRange,
  AttemptCapExceeded,
  Overflow,
  LengthMismatch,
  InvalidExpected,
  ZeroSample,
  ImpossibleObservation,
  Parse,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace peerwheel
