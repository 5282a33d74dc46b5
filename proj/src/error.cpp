#include "stateid/error.hpp"

namespace stateid {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::MalformedNumber: return "MalformedNumber";
    case Errc::NegativeValue: return "NegativeValue";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::InvalidModel: return "InvalidModel";
    case Errc::MissingCpt: return "MissingCpt";
    case Errc::ParentMismatch: return "ParentMismatch";
    case Errc::RowSumNotOne: return "RowSumNotOne";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::UnknownState: return "UnknownState";
    case Errc::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case Errc::ZeroConditioningEvent: return "ZeroConditioningEvent";
    case Errc::BadEliminationOrder: return "BadEliminationOrder";
    case Errc::ScopeMismatch: return "ScopeMismatch";
    case Errc::MalformedConstraint: return "MalformedConstraint";
    case Errc::UnsatisfiableSyntactically: return "UnsatisfiableSyntactically";
    case Errc::PositivityCheckFailed: return "PositivityCheckFailed";
    case Errc::EpsOutOfRange: return "EpsOutOfRange";
    case Errc::NotABijection: return "NotABijection";
    case Errc::ConstraintNotSatisfied: return "ConstraintNotSatisfied";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnboundSymbol: return "UnboundSymbol";
    case Errc::UnboundPlaceholder: return "UnboundPlaceholder";
    case Errc::HiddenVariable: return "HiddenVariable";
    case Errc::FixtureLoadError: return "FixtureLoadError";
    case Errc::FileFormat: return "FileFormat";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

}  // namespace stateid
