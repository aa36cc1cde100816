#pragma once
// Error taxonomy shared by all modules.
//
// DomainError covers violations of mathematical preconditions or invariants
// (degenerate beliefs, zero-probability conditioning events, out-of-range
// parameters, ...).  ConfigError covers malformed or schema-invalid input
// documents.  The CLI maps ConfigError -> exit 2 and DomainError -> exit 3.

#include <stdexcept>
#include <string>

namespace lab {

enum class errc {
  ZeroMass,
  NonFinite,
  LengthMismatch,
  ZeroVariance,
  UndefinedConditional,
  ZeroProbabilityEvidence,
  WrongTrustClass,
  NonPositiveScale,
  DegenerateBelief,
  ChiOutOfRange,
  NoThreshold,
  DegenerateUtility,
  InvalidPersuasionCurve,
  DimensionMismatch,
  InvalidProbability,
  WrongTagDomain,
  InvalidConfig,
};

const char* errcName(errc code) noexcept;

class DomainError : public std::runtime_error {
 public:
  DomainError(errc code, const std::string& message)
      : std::runtime_error(std::string(errcName(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lab
