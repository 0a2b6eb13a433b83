#pragma once

#include <stdexcept>
#include <string>

namespace framecert {

// Failure categories surfaced by the toolkit. The CLI maps these onto its
// exit-code contract, so every throw site picks its kind deliberately.
enum class ErrorKind {
  NonFinite,             // NaN/Inf reached a public operation
  NotHermitian,          // symmetry check failed beyond tolerance
  DimensionMismatch,
  NotAFrame,             // no positive lower frame bound
  NotAtomicForL,         // range condition fails, no bounded coefficient map
  DomainViolation,       // point outside the kernel domain
  NotAvailable,          // no closed form for the requested quantity
  QuadratureDivergence,  // integral fails the resolution-doubling gate
  NonRadialWeight,       // weight not expressible as a function of |z|
  InvalidArgument,       // parameter outside its documented range
  SchemaError,           // malformed input document
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotAFrame: return "NotAFrame";
    case ErrorKind::NotAtomicForL: return "NotAtomicForL";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::NotAvailable: return "NotAvailable";
    case ErrorKind::QuadratureDivergence: return "QuadratureDivergence";
    case ErrorKind::NonRadialWeight: return "NonRadialWeight";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct NonFiniteError : Error {
  explicit NonFiniteError(const std::string& w) : Error(ErrorKind::NonFinite, w) {}
};
struct NotHermitianError : Error {
  explicit NotHermitianError(const std::string& w) : Error(ErrorKind::NotHermitian, w) {}
};
struct DimensionMismatchError : Error {
  explicit DimensionMismatchError(const std::string& w) : Error(ErrorKind::DimensionMismatch, w) {}
};
struct NotAFrameError : Error {
  explicit NotAFrameError(const std::string& w) : Error(ErrorKind::NotAFrame, w) {}
};
struct NotAtomicForLError : Error {
  explicit NotAtomicForLError(const std::string& w) : Error(ErrorKind::NotAtomicForL, w) {}
};
struct DomainViolationError : Error {
  explicit DomainViolationError(const std::string& w) : Error(ErrorKind::DomainViolation, w) {}
};
struct NotAvailableError : Error {
  explicit NotAvailableError(const std::string& w) : Error(ErrorKind::NotAvailable, w) {}
};
struct QuadratureDivergenceError : Error {
  explicit QuadratureDivergenceError(const std::string& w) : Error(ErrorKind::QuadratureDivergence, w) {}
};
struct NonRadialWeightError : Error {
  explicit NonRadialWeightError(const std::string& w) : Error(ErrorKind::NonRadialWeight, w) {}
};
struct InvalidArgumentError : Error {
  explicit InvalidArgumentError(const std::string& w) : Error(ErrorKind::InvalidArgument, w) {}
};
struct SchemaError : Error {
  explicit SchemaError(const std::string& w) : Error(ErrorKind::SchemaError, w) {}
};

}  // namespace framecert
