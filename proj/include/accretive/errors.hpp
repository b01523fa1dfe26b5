#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace accretive {

enum class ErrorKind {
  InvalidArgument,
  NotHermitian,
  Singular,
  Overflow,
  OutOfDomain,
  MethodDisagreement,
  DimensionMismatch,
  GenerationFailed,
  SpectrumOnCut,
  QuadratureNotConverged,
  HypothesisFailed,
  DegenerateData,
  ParseError,
  NotSquare,
  IoError,
  CertificateFailure,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::MethodDisagreement: return "MethodDisagreement";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::GenerationFailed: return "GenerationFailed";
    case ErrorKind::SpectrumOnCut: return "SpectrumOnCut";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::HypothesisFailed: return "HypothesisFailed";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::CertificateFailure: return "CertificateFailure";
  }
  return "Unknown";
}

/// Base exception for every failure raised by the library. The kind is
/// machine-readable; the message is a one-line diagnostic.
class LabError : public std::runtime_error {
 public:
  LabError(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw LabError(kind, message);
}

}  // namespace accretive
