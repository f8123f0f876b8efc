#pragma once

#include <stdexcept>
#include <string>

namespace ncfr {

enum class ErrorKind {
  AlphabetMismatch,
  ShapeMismatch,
  Config,
  NotHermitian,
  NotPositive,
  NotPositiveAtDepth,
  StructureViolation,
  Parse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a truncation of the multi-Toeplitz operator fails the PSD test.
class NotPositiveAtDepth : public Error {
 public:
  NotPositiveAtDepth(int depth, double min_eigenvalue);

  int depth() const noexcept { return depth_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  int depth_;
  double min_eigenvalue_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotPositiveAtDepth: return "NotPositiveAtDepth";
    case ErrorKind::StructureViolation: return "StructureViolation";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Error";
}

inline NotPositiveAtDepth::NotPositiveAtDepth(int depth, double min_eigenvalue)
    : Error(ErrorKind::NotPositiveAtDepth,
            "truncation at depth " + std::to_string(depth) +
                " has minimum eigenvalue " + std::to_string(min_eigenvalue)),
      depth_(depth),
      min_eigenvalue_(min_eigenvalue) {}

}  // namespace ncfr
