#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace col {

enum class ErrorCode {
  SeedError,
  DuplicateConcept,
  UnknownConcept,
  UnknownClass,
  DuplicateFeature,
  DuplicateValue,
  DuplicateFrame,
  UnknownFrame,
  UnknownReference,
  ReciprocityConflict,
  UnguardedDivision,
  InUse,
  MissingExternal,
  GuardError,
  Inconsistent,
  NonInvertible,
  Unbound,
  NoCause,
  ParseError,
  ProtocolError,
  UnknownValue,
  MissingLabel,
  ModeError,
  NoEvidence,
  ClassSetMismatch,
  NotOrdinal,
  FormatError,
  InvalidKb,
  IoError,
};

std::string_view error_name(ErrorCode code);

// Every domain failure in the library is reported through this type; the
// code is stable and is what the CLI and HTTP layers dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace col
