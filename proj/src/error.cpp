#include "ramaniton/error.hpp"

namespace ramaniton {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::DegenerateModes: return "DegenerateModes";
    case ErrorKind::NonCanonical: return "NonCanonical";
    case ErrorKind::InternalConsistency: return "InternalConsistency";
    case ErrorKind::Singularity: return "Singularity";
    case ErrorKind::UndefinedCorrelation: return "UndefinedCorrelation";
    case ErrorKind::InvalidOccupations: return "InvalidOccupations";
    case ErrorKind::NoResonance: return "NoResonance";
    case ErrorKind::TruncationInadequate: return "TruncationInadequate";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace ramaniton
