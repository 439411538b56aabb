#include "kode/errors.hpp"

namespace kode {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::NonPositiveBandwidth: return "NonPositiveBandwidth";
    case ErrorKind::AllPointsIdentical: return "AllPointsIdentical";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NegativeCompartment: return "NegativeCompartment";
    case ErrorKind::PopulationTooSmall: return "PopulationTooSmall";
    case ErrorKind::BadCount: return "BadCount";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::FormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "UnknownError";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

}  // namespace kode
