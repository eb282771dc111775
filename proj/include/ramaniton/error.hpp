#pragma once

#include <stdexcept>
#include <string>

namespace ramaniton {

enum class ErrorKind {
  InvalidParameters,
  InvalidConfig,
  DegenerateModes,
  NonCanonical,
  InternalConsistency,
  Singularity,
  UndefinedCorrelation,
  InvalidOccupations,
  NoResonance,
  TruncationInadequate,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ramaniton
