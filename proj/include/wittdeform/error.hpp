#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wd {

enum class Errc {
  MalformedSpec,
  ParseError,
  CtxMismatch,
  NotAUnit,
  UnsupportedCtx,
  NotIntegral,
  UnboundSymbol,
  LengthMismatch,
  LengthTooShort,
  IntegralityFailure,
  NonUnitConstantTerm,
  NonzeroConstantTerm,
  CapMismatch,
  NonInvertibleFactorial,
  NonUnitBase,
  NoSuchA,
  NotInvertible,
  RelationViolated,
  BinomialDivisibilityFailure,
  BudgetExceeded,
  ScenarioInvalid,
  HypothesisViolated,
  NotInKernel,
  UnsupportedE,
  Io,
};

std::string_view errc_name(Errc c);

/// Every failure in the library is reported as a wd::Error carrying a code
/// so callers (and the CLI exit-code contract) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace wd
