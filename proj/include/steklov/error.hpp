#ifndef STEKLOV_ERROR_HPP
#define STEKLOV_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace steklov {

enum class ErrorCode {
  EmptyBoundary,
  SelfLoop,
  DuplicateEdge,
  IndexOutOfRange,
  MalformedRotation,
  Disconnected,
  SingularInterior,
  ConvergenceFailure,
  ZeroBoundaryNorm,
  CentroidNotZero,
  NonCycleFace,
  NotTriangulated,
  BrokenPath,
  EndpointMismatch,
  BoundaryMismatch,
  NonzeroGenus,
  NormalizationFailure,
  SameVertex,
  TooSmall,
  CertificateViolation,
  Schema,
  InstanceTooLarge,
  Io,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyBoundary: return "EmptyBoundary";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::MalformedRotation: return "MalformedRotation";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::SingularInterior: return "SingularInterior";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::ZeroBoundaryNorm: return "ZeroBoundaryNorm";
    case ErrorCode::CentroidNotZero: return "CentroidNotZero";
    case ErrorCode::NonCycleFace: return "NonCycleFace";
    case ErrorCode::NotTriangulated: return "NotTriangulated";
    case ErrorCode::BrokenPath: return "BrokenPath";
    case ErrorCode::EndpointMismatch: return "EndpointMismatch";
    case ErrorCode::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorCode::NonzeroGenus: return "NonzeroGenus";
    case ErrorCode::NormalizationFailure: return "NormalizationFailure";
    case ErrorCode::SameVertex: return "SameVertex";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::CertificateViolation: return "CertificateViolation";
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Numerical non-convergence, as opposed to malformed input.
  bool is_convergence() const noexcept {
    return code_ == ErrorCode::ConvergenceFailure ||
           code_ == ErrorCode::NormalizationFailure;
  }

 private:
  ErrorCode code_;
};

}  // namespace steklov

#endif  // STEKLOV_ERROR_HPP
