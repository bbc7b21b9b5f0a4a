#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ergolab {

enum class ErrorKind {
  kInvalidAlphabet,
  kInvalidTree,
  kInvalidMatrix,
  kAmbiguousStationary,
  kNoReturnObserved,
  kNotMeasurePreserving,
  kNotBoundarySupported,
  kDomainError,
  kInsufficientDepth,
  kEmptyTreeAtPoint,
  kUnsupportedObservable,
  kConfigError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidAlphabet: return "InvalidAlphabet";
    case ErrorKind::kInvalidTree: return "InvalidTree";
    case ErrorKind::kInvalidMatrix: return "InvalidMatrix";
    case ErrorKind::kAmbiguousStationary: return "AmbiguousStationary";
    case ErrorKind::kNoReturnObserved: return "NoReturnObserved";
    case ErrorKind::kNotMeasurePreserving: return "NotMeasurePreserving";
    case ErrorKind::kNotBoundarySupported: return "NotBoundarySupported";
    case ErrorKind::kDomainError: return "DomainError";
    case ErrorKind::kInsufficientDepth: return "InsufficientDepth";
    case ErrorKind::kEmptyTreeAtPoint: return "EmptyTreeAtPoint";
    case ErrorKind::kUnsupportedObservable: return "UnsupportedObservable";
    case ErrorKind::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace ergolab
