#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stateid {

enum class Errc {
  MalformedNumber,
  NegativeValue,
  DivisionByZero,
  InvalidModel,
  MissingCpt,
  ParentMismatch,
  RowSumNotOne,
  CycleDetected,
  UnknownVariable,
  UnknownState,
  StateSpaceTooLarge,
  ZeroConditioningEvent,
  BadEliminationOrder,
  ScopeMismatch,
  MalformedConstraint,
  UnsatisfiableSyntactically,
  PositivityCheckFailed,
  EpsOutOfRange,
  NotABijection,
  ConstraintNotSatisfied,
  SyntaxError,
  UnboundSymbol,
  UnboundPlaceholder,
  HiddenVariable,
  FixtureLoadError,
  FileFormat,
};

std::string_view errc_name(Errc code);

// All library failures surface as this exception; `code()` is the stable
// machine-readable part, `what()` names the offending variable/row.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace stateid
