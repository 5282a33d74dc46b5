#include <gtest/gtest.h>

#include "helpers.hpp"
#include "oracle.hpp"
#include "stateid/constraints.hpp"
#include "stateid/estimand.hpp"
#include "stateid/gallery.hpp"

using namespace stateid;
using testing_models::chain;
using testing_models::confounded;

namespace {

Rat eval(const std::string& text, const Cbn& m, const Binding& b = {}) {
  return evaluate(parse_estimand(text), m, b);
}

}  // namespace

TEST(EstimandParse, ProbabilityTerm) {
  auto e = parse_estimand("Pr(Y=0 | X=1, Z=$z)");
  ASSERT_EQ(e.root->kind, Expr::Kind::Prob);
  ASSERT_EQ(e.root->event.size(), 1u);
  EXPECT_EQ(e.root->event[0].var, "Y");
  EXPECT_EQ(e.root->event[0].kind, Atom::Kind::Literal);
  ASSERT_EQ(e.root->given.size(), 2u);
  EXPECT_EQ(e.root->given[1].kind, Atom::Kind::Placeholder);
  EXPECT_EQ(e.root->given[1].value, "z");
  EXPECT_EQ(free_placeholders(e), std::set<std::string>{"z"});
  EXPECT_TRUE(e.warnings.empty());
}

TEST(EstimandParse, Precedence) {
  auto e = parse_estimand("1/2 + P(X=0) * 3 - 1");
  ASSERT_EQ(e.root->kind, Expr::Kind::Sub);
  const auto& add = *e.root->args[0];
  ASSERT_EQ(add.kind, Expr::Kind::Add);
  EXPECT_EQ(add.args[0]->kind, Expr::Kind::Const);
  EXPECT_EQ(add.args[0]->value, Rat(1, 2));
  EXPECT_EQ(add.args[1]->kind, Expr::Kind::Mul);
  EXPECT_EQ(parse_estimand("1 / 2").root->kind, Expr::Kind::Div);
  EXPECT_EQ(parse_estimand("0.25").root->value, Rat(1, 4));
}

TEST(EstimandParse, SumsBindNames) {
  auto e = parse_estimand("sum_{A,B} P(A, Y=B)");
  ASSERT_EQ(e.root->kind, Expr::Kind::Sum);
  EXPECT_EQ(e.root->bound, (std::vector<std::string>{"A", "B"}));
  const auto& p = *e.root->args[0];
  EXPECT_EQ(p.event[0].kind, Atom::Kind::Bound);
  EXPECT_EQ(p.event[1].kind, Atom::Kind::Bound);
  EXPECT_EQ(p.event[1].value, "B");
  // the body of a sum is one factor
  EXPECT_EQ(parse_estimand("sum_{A} P(A) * 2").root->kind, Expr::Kind::Mul);
}

TEST(EstimandParse, Errors) {
  EXPECT_ERRC(parse_estimand(""), SyntaxError);
  EXPECT_ERRC(parse_estimand("P(X=0"), SyntaxError);
  EXPECT_ERRC(parse_estimand("P(X=0) +"), SyntaxError);
  EXPECT_ERRC(parse_estimand("P(X=0) P(Y=0)"), SyntaxError);
  EXPECT_ERRC(parse_estimand("sum_{X,X} P(X)"), SyntaxError);
  EXPECT_ERRC(parse_estimand("Q(X=0)"), SyntaxError);
  EXPECT_ERRC(parse_estimand("P(X=)"), SyntaxError);
  EXPECT_ERRC(parse_estimand("P(Y=0 | X)"), UnboundSymbol);
  try {
    parse_estimand("P(Y=0 | X)");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(": at 8:"), std::string::npos) << e.what();
  }
  try {
    parse_estimand("P(X=0) ) ");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(": at 7:"), std::string::npos) << e.what();
  }
}

TEST(EstimandParse, ShadowWarnings) {
  EXPECT_EQ(parse_estimand("sum_{X} sum_{X} P(X)").warnings.size(), 1u);
  EXPECT_EQ(parse_estimand("sum_{X} P(X=$x)").warnings.size(), 2u);
  EXPECT_EQ(parse_estimand("P(X=$x) * sum_{X} P(X)").warnings.size(), 1u);
  EXPECT_TRUE(parse_estimand("sum_{X} P(X) * P(Y=$y)").warnings.empty());
}

TEST(EstimandParse, CanonicalRenderingIsStable) {
  std::vector<std::string> texts{"1/2 + P(X=0) * 3 - 1", "P(A=0) - (P(B=0) - P(C=0))", "(P(A=1) + 1) / (2 * P(B=0 | C=1))",
                                 "sum_{A,B} (P(A, Y=B) + P(B))", "Pr(Y=$y | X=$x)"};
  for (const auto& f : builtin_fixtures())
    for (const auto& e : f.estimands) texts.push_back(e.text);
  for (const auto& t : texts) {
    auto once = to_string(parse_estimand(t));
    EXPECT_EQ(to_string(parse_estimand(once)), once) << t;
  }
  EXPECT_EQ(to_string(parse_estimand("P(A=0) - (P(B=0) - P(C=0))")), "P(A=0) - (P(B=0) - P(C=0))");
  EXPECT_EQ(to_string(parse_estimand("Pr( Y = 0|X=1 )")), "P(Y=0 | X=1)");
}

TEST(EstimandEval, BasicIdentities) {
  auto m = chain(Rat(1, 3), Rat(1, 4), Rat(3, 4));
  EXPECT_EQ(eval("1", m), Rat(1));
  EXPECT_EQ(eval("sum_{X} P(X)", m), Rat(1));
  EXPECT_EQ(eval("sum_{X,Y} P(X, Y)", m), Rat(1));
  EXPECT_EQ(eval("P(X=0) + P(X=1)", m), Rat(1));
  EXPECT_EQ(eval("P(Y=1 | X=1)", m), Rat(3, 4));
  EXPECT_EQ(eval("P(Y=1, X=1) / P(X=1)", m), Rat(3, 4));
  EXPECT_EQ(eval("P(X=1 | X=1)", m), Rat(1));
  EXPECT_EQ(eval("P(X=0, X=1)", m), Rat(0));
  EXPECT_EQ(eval("P(X=0 | X=1)", m), Rat(0));
  EXPECT_EQ(eval("P(Y=$y | X=$x)", m, {{"x", "0"}, {"y", "1"}}), Rat(1, 4));
  EXPECT_EQ(eval("P(Y=1)", m), oracle::prob(m, {{"Y", "1"}}));
}

TEST(EstimandEval, Linearity) {
  auto m = chain(Rat(2, 7), Rat(1, 5), Rat(5, 6));
  auto a = eval("P(Y=1 | X=0)", m);
  auto b = eval("P(X=1)", m);
  EXPECT_EQ(eval("2 * P(Y=1 | X=0) + 3/4 * P(X=1)", m), Rat(2) * a + Rat(3, 4) * b);
  EXPECT_EQ(eval("sum_{X} (P(X) + P(Y=1 | X))", m), Rat(1) + eval("sum_{X} P(Y=1 | X)", m));
}

TEST(EstimandEval, BoundSymbolsRename) {
  auto m = chain(Rat(2, 7), Rat(1, 5), Rat(5, 6));
  // X and Y share the state list, so either can serve as the bound symbol.
  EXPECT_EQ(eval("sum_{X} (P(X) * P(Y=1 | X))", m), eval("sum_{Y} (P(X=Y) * P(Y=1 | X=Y))", m));
  EXPECT_EQ(eval("sum_{X} (P(X) * P(Y=1 | X))", m), oracle::prob(m, {{"Y", "1"}}));
}

TEST(EstimandEval, Errors) {
  auto m = confounded(Rat(1, 2), Rat(1, 4), Rat(3, 4), {Rat(1, 5), Rat(2, 5), Rat(3, 5), Rat(4, 5)});
  EXPECT_ERRC(eval("P(U=0)", m), HiddenVariable);
  EXPECT_ERRC(eval("sum_{U} P(Y=0)", m), HiddenVariable);
  EXPECT_ERRC(eval("P(Q=0)", m), UnknownVariable);
  EXPECT_ERRC(eval("P(X=9)", m), UnknownState);
  EXPECT_ERRC(eval("P(Y=$y)", m), UnboundPlaceholder);
  EXPECT_ERRC(eval("P(Y=$y)", m, {{"y", "9"}}), UnknownState);
  EXPECT_ERRC(eval("P(X=0) - 1", m), NegativeValue);
  EXPECT_ERRC(eval("P(Y=0 | X=0, X=1)", m), ZeroConditioningEvent);
  auto det = chain(Rat(0), Rat(1, 4), Rat(3, 4));
  EXPECT_ERRC(eval("P(Y=0 | X=1)", det), ZeroConditioningEvent);
  EXPECT_ERRC(eval("P(Y=0) / P(X=1)", det), DivisionByZero);
  auto obs = observational(m);
  EXPECT_ERRC(evaluate(parse_estimand("P(U=0)"), obs, {}), HiddenVariable);
}

TEST(EstimandEval, BackdoorOnSampledModels) {
  // Z -> X -> Y with Z -> Y: adjusting for Z recovers Pr_x(y).
  CausalGraph g({numbered_variable("Z", 3), numbered_variable("X", 2), numbered_variable("Y", 2)},
                {{"Z", "X"}, {"Z", "Y"}, {"X", "Y"}});
  auto e = parse_estimand("sum_{Z} (P(Z) * P(Y=$y | X=$x, Z))");
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto m = sample_constrained(g, {}, seed);
    for (const char* x : {"0", "1"})
      for (const char* y : {"0", "1"})
        EXPECT_EQ(evaluate(e, m, {{"x", x}, {"y", y}}), oracle::effect(m, {{"X", x}}, {{"Y", y}}));
  }
}

TEST(EstimandEval, Bindings) {
  EXPECT_EQ(parse_binding("$x=0, y=1"), (Binding{{"x", "0"}, {"y", "1"}}));
  EXPECT_TRUE(parse_binding("").empty());
  EXPECT_ERRC(parse_binding("x"), FileFormat);
}
