#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rsvdlab {

enum class ErrorKind {
  DimensionMismatch,
  NonFiniteResult,
  NoConvergence,
  RankTooLarge,
  SingularGram,
  TheoremModeViolation,
  ConfigError,
  ParseError,
  CheckpointMismatch,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries one of the kinds above so that
// the CLI can map it onto a process exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rsvdlab
