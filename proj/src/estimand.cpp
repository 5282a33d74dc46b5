#include "stateid/estimand.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace stateid {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool label_char(char c) { return ident_char(c) || c == '.' || c == '-'; }

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Estimand run() {
    Estimand e;
    e.text = std::string(s_);
    e.root = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    e.warnings = std::move(warnings_);
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what, Errc code = Errc::SyntaxError) const {
    throw Error(code, "at " + std::to_string(i_) + ": " + what);
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(i_, tok.size()) != tok) return false;
    i_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string ident() {
    skip();
    if (i_ >= s_.size() || !ident_start(s_[i_])) fail("expected a name");
    auto start = i_;
    while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
    return std::string(s_.substr(start, i_ - start));
  }

  std::string label() {
    skip();
    auto start = i_;
    while (i_ < s_.size() && label_char(s_[i_])) ++i_;
    if (start == i_) fail("expected a state");
    return std::string(s_.substr(start, i_ - start));
  }

  ExprPtr binary(Expr::Kind k, std::size_t pos, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->pos = pos;
    e->args = {std::move(a), std::move(b)};
    return e;
  }

  ExprPtr expr() {
    auto lhs = term();
    for (;;) {
      skip();
      auto pos = i_;
      if (eat("+")) lhs = binary(Expr::Kind::Add, pos, lhs, term());
      else if (eat("-")) lhs = binary(Expr::Kind::Sub, pos, lhs, term());
      else return lhs;
    }
  }

  ExprPtr term() {
    auto lhs = factor();
    for (;;) {
      skip();
      auto pos = i_;
      if (eat("*")) lhs = binary(Expr::Kind::Mul, pos, lhs, factor());
      else if (eat("/")) lhs = binary(Expr::Kind::Div, pos, lhs, factor());
      else return lhs;
    }
  }

  ExprPtr factor() {
    skip();
    auto e = std::make_shared<Expr>();
    e->pos = i_;
    if (eat("sum_{")) {
      e->kind = Expr::Kind::Sum;
      do {
        auto pos = i_;
        auto name = ident();
        if (std::find(e->bound.begin(), e->bound.end(), name) != e->bound.end())
          fail("'" + name + "' bound twice");
        if (std::find(scope_.begin(), scope_.end(), name) != scope_.end())
          warnings_.push_back("at " + std::to_string(pos) + ": sum over " + name +
                              " shadows an outer sum over " + name);
        e->bound.push_back(name);
      } while (eat(","));
      expect("}");
      scope_.insert(scope_.end(), e->bound.begin(), e->bound.end());
      e->args.push_back(factor());
      scope_.resize(scope_.size() - e->bound.size());
      return e;
    }
    if (eat("Pr(") || eat("P(")) {
      e->kind = Expr::Kind::Prob;
      e->event = atoms();
      if (eat("|")) e->given = atoms();
      expect(")");
      return e;
    }
    if (eat("(")) {
      auto inner = expr();
      expect(")");
      return inner;
    }
    if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      auto start = i_;
      while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
      // "p/q" only when the slash is followed by a digit; otherwise it is division.
      if (i_ + 1 < s_.size() && s_[i_] == '/' && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
        ++i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      }
      e->kind = Expr::Kind::Const;
      e->value = parse_rat(s_.substr(start, i_ - start));
      return e;
    }
    if (i_ >= s_.size()) fail("unexpected end of input");
    fail("unexpected '" + std::string(1, s_[i_]) + "'");
  }

  bool bound(const std::string& name) const {
    return std::find(scope_.begin(), scope_.end(), name) != scope_.end();
  }

  std::vector<Atom> atoms() {
    std::vector<Atom> out;
    do {
      skip();
      Atom a;
      a.pos = i_;
      a.var = ident();
      if (eat("=")) {
        skip();
        if (eat("$")) {
          a.kind = Atom::Kind::Placeholder;
          a.value = ident();
          if (bound(a.var))
            warnings_.push_back("at " + std::to_string(a.pos) + ": " + a.var + "=$" + a.value +
                                " fixes a variable an enclosing sum ranges over");
        } else {
          a.value = label();
          a.kind = bound(a.value) ? Atom::Kind::Bound : Atom::Kind::Literal;
        }
      } else {
        if (!bound(a.var)) {
          i_ = a.pos;
          fail("'" + a.var + "' is not bound by an enclosing sum", Errc::UnboundSymbol);
        }
        a.kind = Atom::Kind::Bound;
        a.value = a.var;
      }
      out.push_back(std::move(a));
    } while (eat(","));
    return out;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::vector<std::string> scope_;
  std::vector<std::string> warnings_;
};

void walk(const Expr& e, const std::function<void(const Expr&)>& f) {
  f(e);
  for (const auto& a : e.args) walk(*a, f);
}

// Names bound by any sum, and variables pinned to placeholders anywhere.
void shadow_warnings(Estimand& e) {
  std::set<std::string> pinned;
  walk(*e.root, [&](const Expr& x) {
    for (const auto* list : {&x.event, &x.given})
      for (const auto& a : *list)
        if (a.kind == Atom::Kind::Placeholder) pinned.insert(a.var);
  });
  walk(*e.root, [&](const Expr& x) {
    if (x.kind != Expr::Kind::Sum) return;
    for (const auto& b : x.bound)
      if (pinned.count(b))
        e.warnings.push_back("at " + std::to_string(x.pos) + ": sum over " + b +
                             " shadows the placeholder-bound " + b + " inside its body");
  });
}

class Evaluator {
 public:
  Evaluator(const Dist& d, const Binding& b) : d_(d), binding_(b) {}

  Rat eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Const:
        return e.value;
      case Expr::Kind::Add:
        return eval(*e.args[0]) + eval(*e.args[1]);
      case Expr::Kind::Sub:
        return eval(*e.args[0]) - eval(*e.args[1]);
      case Expr::Kind::Mul: {
        auto a = eval(*e.args[0]);
        if (a.is_zero()) return a;
        return a * eval(*e.args[1]);
      }
      case Expr::Kind::Div:
        return eval(*e.args[0]) / eval(*e.args[1]);
      case Expr::Kind::Sum:
        return sum(e, 0);
      case Expr::Kind::Prob:
        return prob(e);
    }
    return Rat(0);
  }

 private:
  const Variable& scope_var(const std::string& name) const {
    for (const auto& v : d_.scope())
      if (v.name == name) return v;
    throw Error(Errc::HiddenVariable, name + " is not an observed variable");
  }

  Rat sum(const Expr& e, std::size_t k) {
    if (k == e.bound.size()) return eval(*e.args[0]);
    const auto& var = scope_var(e.bound[k]);
    auto& slot = env_[e.bound[k]];
    auto saved = slot;
    Rat total;
    for (const auto& s : var.states) {
      slot.push_back(s);
      total += sum(e, k + 1);
      slot.pop_back();
    }
    slot = saved;
    return total;
  }

  std::string resolve(const Atom& a) const {
    switch (a.kind) {
      case Atom::Kind::Literal:
        return a.value;
      case Atom::Kind::Bound:
        return env_.at(a.value).back();
      case Atom::Kind::Placeholder: {
        auto it = binding_.find(a.value);
        if (it == binding_.end())
          throw Error(Errc::UnboundPlaceholder, "$" + a.value + " has no binding");
        return it->second;
      }
    }
    return {};
  }

  // False when two atoms pin one variable to different states.
  bool build(const std::vector<Atom>& atoms, Instantiation& out) const {
    bool ok = true;
    for (const auto& a : atoms) {
      const auto& var = scope_var(a.var);
      auto state = resolve(a);
      var.state_index(state);
      if (const auto* prev = out.get(a.var)) {
        if (*prev != state) ok = false;
      } else {
        out.set(a.var, state);
      }
    }
    return ok;
  }

  Rat prob(const Expr& e) {
    Instantiation event, given;
    bool event_ok = build(e.event, event);
    bool given_ok = build(e.given, given);
    if (!given_ok) throw Error(Errc::ZeroConditioningEvent, "contradictory conditioning event");
    if (given.empty()) return event_ok ? d_.probability(event) : Rat(0);
    if (!event_ok || !event.compatible(given)) {
      if (d_.probability(given).is_zero())
        throw Error(Errc::ZeroConditioningEvent, "Pr(" + given.str() + ") = 0");
      return Rat(0);
    }
    return conditional(d_, event, given);
  }

  const Dist& d_;
  const Binding& binding_;
  std::map<std::string, std::vector<std::string>> env_;
};

std::string render_atoms(const std::vector<Atom>& atoms) {
  std::string out;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (k) out += ", ";
    const auto& a = atoms[k];
    if (a.kind == Atom::Kind::Bound && a.value == a.var) {
      out += a.var;
    } else {
      out += a.var + "=" + (a.kind == Atom::Kind::Placeholder ? "$" : "") + a.value;
    }
  }
  return out;
}

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    default:
      return 3;
  }
}

std::string render(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return e.value.str();
    case Expr::Kind::Prob:
      return "P(" + render_atoms(e.event) + (e.given.empty() ? "" : " | " + render_atoms(e.given)) + ")";
    case Expr::Kind::Sum: {
      std::string names;
      for (std::size_t k = 0; k < e.bound.size(); ++k) names += (k ? "," : "") + e.bound[k];
      const auto& body = *e.args[0];
      auto inner = render(body);
      if (precedence(body.kind) < 3) inner = "(" + inner + ")";
      return "sum_{" + names + "} " + inner;
    }
    default: {
      const char* op = e.kind == Expr::Kind::Add ? " + " : e.kind == Expr::Kind::Sub ? " - "
                     : e.kind == Expr::Kind::Mul ? " * " : " / ";
      auto lhs = render(*e.args[0]);
      auto rhs = render(*e.args[1]);
      if (precedence(e.args[0]->kind) < precedence(e.kind)) lhs = "(" + lhs + ")";
      // Right operands of equal precedence need parentheses (a - (b - c)).
      if (precedence(e.args[1]->kind) <= precedence(e.kind)) rhs = "(" + rhs + ")";
      return lhs + op + rhs;
    }
  }
}

}  // namespace

Estimand parse_estimand(std::string_view text) {
  auto e = Parser(text).run();
  shadow_warnings(e);
  return e;
}

std::set<std::string> free_placeholders(const Estimand& e) {
  std::set<std::string> out;
  walk(*e.root, [&](const Expr& x) {
    for (const auto* list : {&x.event, &x.given})
      for (const auto& a : *list)
        if (a.kind == Atom::Kind::Placeholder) out.insert(a.value);
  });
  return out;
}

void validate_estimand(const Estimand& e, const CausalGraph& g) {
  auto check_var = [&](const std::string& name) -> const Variable& {
    const auto& v = g.variable(name);
    if (!v.observed) throw Error(Errc::HiddenVariable, name + " is hidden; estimands may use observed variables only");
    return v;
  };
  walk(*e.root, [&](const Expr& x) {
    for (const auto& b : x.bound) check_var(b);
    for (const auto* list : {&x.event, &x.given})
      for (const auto& a : *list) {
        const auto& v = check_var(a.var);
        if (a.kind == Atom::Kind::Literal) v.state_index(a.value);
      }
  });
}

Binding parse_binding(std::string_view text) {
  Binding out;
  for (const auto& [k, v] : Instantiation::parse(text)) {
    auto key = k;
    if (!key.empty() && key.front() == '$') key.erase(0, 1);
    out[key] = v;
  }
  return out;
}

Rat evaluate(const Estimand& e, const Cbn& model, const Binding& binding, const InferenceOptions& opts) {
  validate_estimand(e, model.graph());
  return evaluate(e, observational(model, opts), binding);
}

Rat evaluate(const Estimand& e, const Dist& observed, const Binding& binding) {
  return Evaluator(observed, binding).eval(*e.root);
}

std::string to_string(const Estimand& e) { return render(*e.root); }

}  // namespace stateid
