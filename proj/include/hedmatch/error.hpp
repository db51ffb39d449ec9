#pragma once

#include <stdexcept>
#include <string>

namespace hedmatch {

enum class ErrorKind {
  kInvalidMap,
  kLengthMismatch,
  kDimensionMismatch,
  kMissingTable,
  kUnsupported,
  kSingularPoint,
  kNonFinite,
  kRationalMass,
  kUnbalanced,
  kPrecondition,
  kParse,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; `kind()` lets callers map failures
// to exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hedmatch
