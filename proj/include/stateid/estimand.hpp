#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stateid/inference.hpp"
#include "stateid/model.hpp"

namespace stateid {

// Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := 'P(' atoms ('|' atoms)? ')' | 'sum_{' names '}' factor | '(' expr ')' | rational
//   atom   := name '=' (literal | '$' placeholder | bound-name) | name
// A bare `name` refers to the symbol bound by an enclosing sum over that
// variable. `Pr(` is accepted for `P(`.

struct Atom {
  enum class Kind { Literal, Placeholder, Bound };

  std::string var;
  Kind kind = Kind::Literal;
  std::string value;  // state label, placeholder name, or bound symbol
  std::size_t pos = 0;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Const, Prob, Sum, Add, Sub, Mul, Div };

  Kind kind = Kind::Const;
  std::size_t pos = 0;
  Rat value;                        // Const
  std::vector<Atom> event, given;   // Prob
  std::vector<std::string> bound;   // Sum
  std::vector<ExprPtr> args;        // Sum: body; binary nodes: lhs, rhs
};

struct Estimand {
  std::string text;
  ExprPtr root;
  /// Shadowing notices; never fatal.
  std::vector<std::string> warnings;
};

/// Errors: SyntaxError and UnboundSymbol, both carrying the byte offset.
Estimand parse_estimand(std::string_view text);

std::set<std::string> free_placeholders(const Estimand& e);

/// Every variable named must exist and be observed; literal states must exist.
/// Errors: UnknownVariable, UnknownState, HiddenVariable.
void validate_estimand(const Estimand& e, const CausalGraph& g);

using Binding = std::map<std::string, std::string>;

/// "x=0,y=1" -> {x: 0, y: 1}; a leading '$' on names is dropped.
Binding parse_binding(std::string_view text);

/// Evaluates against Pr(V) of `model`.
/// Errors: UnboundPlaceholder, ZeroConditioningEvent, HiddenVariable.
Rat evaluate(const Estimand& e, const Cbn& model, const Binding& binding,
             const InferenceOptions& opts = {});
/// Evaluates against a precomputed observational table.
Rat evaluate(const Estimand& e, const Dist& observed, const Binding& binding);

/// Canonical rendering, stable under reparsing.
std::string to_string(const Estimand& e);

}  // namespace stateid
