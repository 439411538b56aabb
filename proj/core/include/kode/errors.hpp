#pragma once

#include <stdexcept>
#include <string>

namespace kode {

// Every failure the library reports, as a closed set so callers (notably the
// CLI) can map error categories to exit codes without string matching.
enum class ErrorKind {
  NonMonotonicTime,    // time stamps not strictly increasing
  DimensionMismatch,   // state/series/model dimensions disagree
  NonFiniteValue,      // NaN or Inf where a finite real is required
  TooShort,            // fewer samples than the operation needs
  ZeroVariance,        // a state dimension is constant; cannot standardize
  NonPositiveBandwidth,
  AllPointsIdentical,  // median pairwise distance is zero
  SingularSystem,      // ridge system could not be solved to tolerance
  Diverged,            // integration or online fitting left the finite range
  ParseError,
  NegativeCompartment, // epidemic counts imply I < 0
  PopulationTooSmall,  // Np below the maximum confirmed count
  BadCount,            // subsample/grid count out of range
  IoError,
  FormatVersionMismatch,
  UnsupportedDimension, // operation defined only for a specific dimension
  InvalidConfig,        // bad numeric configuration (lambda < 0, dt <= 0, ...)
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kode
