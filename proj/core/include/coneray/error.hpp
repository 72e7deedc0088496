#pragma once

#include <stdexcept>
#include <string>

namespace coneray {

// Failure categories surfaced by the library. The CLI maps these onto exit
// codes, so additions here usually need a corresponding entry there.
enum class Errc {
  DimensionMismatch,
  DegreeMismatch,
  ModeError,
  NonHomogeneousInput,
  ConflictingAssignment,
  UnsupportedDimension,
  NotPsd,
  NotNonnegative,
  NotIndefinite,
  NotAZero,
  PreconditionViolated,
  DegenerateCofactor,
  NonzeroDeterminant,
  RankExceeded,
  CertificateNotFound,
  NotInCone,
  InputError,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DegreeMismatch: return "DegreeMismatch";
    case Errc::ModeError: return "ModeError";
    case Errc::NonHomogeneousInput: return "NonHomogeneousInput";
    case Errc::ConflictingAssignment: return "ConflictingAssignment";
    case Errc::UnsupportedDimension: return "UnsupportedDimension";
    case Errc::NotPsd: return "NotPsd";
    case Errc::NotNonnegative: return "NotNonnegative";
    case Errc::NotIndefinite: return "NotIndefinite";
    case Errc::NotAZero: return "NotAZero";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::DegenerateCofactor: return "DegenerateCofactor";
    case Errc::NonzeroDeterminant: return "NonzeroDeterminant";
    case Errc::RankExceeded: return "RankExceeded";
    case Errc::CertificateNotFound: return "CertificateNotFound";
    case Errc::NotInCone: return "NotInCone";
    case Errc::InputError: return "InputError";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace coneray
