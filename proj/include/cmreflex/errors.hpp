#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cmreflex {

enum class Errc {
  InvalidArgument,
  Parse,
  Unsupported,
  NotIrreducible,
  ClosureTooLarge,
  OrderMismatch,
  ZeroIdeal,
  IndexDivisible,
  EnumerationBoundExceeded,
  ConjugatesMissing,
  RootNotExact,
  SearchExhausted,
  UnitSearchInconclusive,
  NonIntegralIdeal,
  ZeroElement,
  CompositionMismatch,
  PairMismatch,
  SourceMismatch,
  BudgetExceeded,
  Supersingular,
  IdentificationFailed,
  RamifiedPrime,
  UnitsUnavailable,
  ModulusTooLarge,
  NotCoprime,
};

std::string_view errc_name(Errc code);

// Every failure the library reports carries one of the codes above; callers
// that care about the kind switch on code(), the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace cmreflex
