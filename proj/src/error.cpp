#include "rsvdlab/error.hpp"

namespace rsvdlab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFiniteResult: return "NonFiniteResult";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::RankTooLarge: return "RankTooLarge";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::TheoremModeViolation: return "TheoremModeViolation";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::CheckpointMismatch: return "CheckpointMismatch";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rsvdlab
