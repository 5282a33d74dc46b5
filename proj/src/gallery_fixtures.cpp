// Built-in certificate pairs and identification formulas.
//
// State labels are numerals. Where a story names states, "0" is the first
// one listed in the fixture notes (entry-level, Y >= 10, low, true, short,
// raining, low-cost, old, severe, yes).

#include "stateid/gallery.hpp"

namespace stateid {

namespace {

using Row = std::span<const std::size_t>;

Variable obs(std::string name, std::size_t card) { return numbered_variable(std::move(name), card, true); }
Variable hid(std::string name, std::size_t card) { return numbered_variable(std::move(name), card, false); }

Rat pct(std::int64_t n) { return Rat(n, 100); }
Rat near(bool hit) { return hit ? pct(99) : pct(1); }

Cpt table(const CausalGraph& g, const std::string& child, const Cpt::RowFn& f) {
  return Cpt::from_function(g, child, f);
}

Cpt uniform(const CausalGraph& g, const std::string& child) {
  const auto n = static_cast<std::int64_t>(g.variable(child).card());
  return table(g, child, [n](Row, std::size_t) { return Rat(1, n); });
}

std::vector<Binding> grid(const std::vector<std::string>& names, std::size_t card) {
  std::vector<Binding> out{{}};
  for (const auto& n : names) {
    std::vector<Binding> next;
    for (const auto& b : out)
      for (std::size_t s = 0; s < card; ++s) {
        auto x = b;
        x[n] = std::to_string(s);
        next.push_back(std::move(x));
      }
    out = std::move(next);
  }
  return out;
}

// ---- salary: CSI ----

CausalGraph salary_graph() {
  return CausalGraph({hid("A", 2), hid("D", 2), obs("Y", 2), obs("J", 3), obs("S", 2)},
                     {{"A", "Y"}, {"A", "J"}, {"D", "J"}, {"D", "S"}, {"Y", "S"}, {"J", "S"}});
}

std::vector<Constraint> salary_constraints() { return {Csi{"S", {"D"}, {{"J", "0"}}, {"Y"}}}; }

Fixture salary() {
  auto g = salary_graph();
  auto common = [&](Cpt s) {
    return build_model(g, {uniform(g, "A"), uniform(g, "D"),
                           table(g, "Y", [](Row p, std::size_t y) { return indicator(y == p[0]); }),
                           table(g, "J",
                                 [](Row p, std::size_t j) {
                                   if (j == 0) return pct(1);
                                   return j == 1 + (p[0] ^ p[1]) ? pct(99) : Rat(0);
                                 }),
                           std::move(s)});
  };
  // S parents: D, Y, J
  auto a = common(table(g, "S", [](Row p, std::size_t s) {
    if (p[2] == 0) return Rat(1, 2);
    return near(s == ((p[2] - 1) ^ p[0] ^ p[1]));
  }));
  auto b = common(table(g, "S", [](Row p, std::size_t s) {
    if (p[2] == 0) return Rat(1, 2);
    return near(s == 0);
  }));

  Fixture f;
  f.id = "salary";
  f.notes =
      "Salary example with one context-specific independence: S independent of D when J=0 "
      "(J: 0 = entry-level; Y: 0 = Y >= 10; S: 0 = low). The pair separates Pr_{Y=0}(J=1,S=1); "
      "the formula identifies Pr_{Y=0}(J=0,S=0).";
  f.pairs.push_back({"salary pair", a, b, salary_constraints(), {{"Y", "0"}}, {{"J", "1"}, {"S", "1"}},
                     Expectation::Separated});
  f.estimands.push_back({"P(J=0) * P(S=0 | Y=0, J=0)", {{"Y", "0"}}, {{"J", "0"}, {"S", "0"}}, {{}}, true,
                         g, salary_constraints()});
  return f;
}

// ---- flu: CFD ----

CausalGraph flu_graph() {
  return CausalGraph({obs("C", 2), obs("T", 2), hid("F", 4), obs("D", 2), obs("R", 2)},
                     {{"C", "F"}, {"T", "F"}, {"F", "D"}, {"D", "R"}, {"F", "R"}});
}

std::vector<Constraint> flu_constraints() { return {Cfd{"F", {"T"}, {{"C", "0"}}}}; }

CertificatePair flu_pair() {
  auto g = flu_graph();
  auto common = [&](Cpt r) {
    return build_model(g, {uniform(g, "C"), uniform(g, "T"),
                           table(g, "F",
                                 [](Row p, std::size_t f) {
                                   if (p[0] == 0) return indicator(f == p[1]);
                                   return f >= 2 ? Rat(1, 2) : Rat(0);
                                 }),
                           table(g, "D",
                                 [](Row p, std::size_t d) {
                                   if (p[0] < 2) return Rat(1, 2);
                                   return indicator(p[0] == d + 2);
                                 }),
                           std::move(r)});
  };
  // R parents: D, F
  auto a = common(table(g, "R", [](Row p, std::size_t r) {
    if (p[1] < 2) return Rat(1, 2);
    return near(r == (p[0] ^ (p[1] - 2)));
  }));
  auto b = common(table(g, "R", [](Row p, std::size_t r) {
    if (p[1] < 2) return Rat(1, 2);
    return near(r == 0);
  }));
  return {"flu pair", a, b, flu_constraints(), {{"C", "1"}, {"D", "0"}}, {{"R", "0"}}, Expectation::Separated};
}

Fixture flu() {
  Fixture f;
  f.id = "flu";
  f.notes =
      "Flu example with hidden F (four states) and the conditional functional dependency "
      "[T, C=0] -> F (C, D, R: 0 = true). The pair agrees on Pr(V) and separates "
      "Pr_{C=1,D=0}(R=0); the formula identifies Pr_{C=0,D=0}(R=0).";
  f.pairs.push_back(flu_pair());
  f.estimands.push_back({"sum_{T} (P(T) * P(R=0 | T, C=0, D=0))", {{"C", "0"}, {"D", "0"}}, {{"R", "0"}}, {{}},
                         true, flu_graph(), flu_constraints()});
  return f;
}

// ---- flight: two CSIs plus a state constraint on A ----

CausalGraph flight_graph(std::size_t a_card) {
  return CausalGraph({hid("U", 2), obs("A", a_card), obs("X", 2), obs("Y", 2)},
                     {{"U", "X"}, {"A", "X"}, {"U", "Y"}, {"X", "Y"}, {"A", "Y"}});
}

std::vector<Constraint> flight_constraints() {
  return {Csi{"X", {"U"}, {{"A", "0"}}, {}}, Csi{"Y", {"U"}, {{"A", "1"}}, {"X"}}};
}

Fixture flight() {
  auto g = flight_graph(3);
  auto common = [&](Cpt y) {
    return build_model(g, {uniform(g, "U"), uniform(g, "A"),
                           table(g, "X",
                                 [](Row p, std::size_t x) {
                                   if (p[1] < 2) return Rat(1, 2);
                                   return indicator(x == p[0]);
                                 }),
                           std::move(y)});
  };
  // Y parents: U, X, A
  auto a = common(table(g, "Y", [](Row p, std::size_t y) {
    if (p[2] < 2) return Rat(1, 2);
    return near(y == (p[0] ^ p[1]));
  }));
  auto b = common(table(g, "Y", [](Row p, std::size_t y) {
    if (p[2] < 2) return Rat(1, 2);
    return near(y == 0);
  }));

  auto sampling = flight_constraints();
  sampling.push_back(StateDomain{"A", {"0", "1"}});

  Fixture f;
  f.id = "flight";
  f.notes =
      "Flight-delay example: hidden U, CSIs X independent of U when A=0 and Y independent of U "
      "when A=1 (A: 0 = short, 1 = long). With a third state for A the pair separates "
      "Pr_{X=0}(Y=0); restricting A to two states makes Pr_X(Y) identifiable by the formula.";
  f.pairs.push_back({"flight pair (ternary A)", a, b, flight_constraints(), {{"X", "0"}}, {{"Y", "0"}},
                     Expectation::Separated});
  f.estimands.push_back({"P(A=0) * P(Y=$y | X=$x, A=0) + P(A=1) * P(Y=$y | X=$x, A=1)",
                         {{"X", "$x"}},
                         {{"Y", "$y"}},
                         grid({"x", "y"}, 2),
                         true,
                         flight_graph(2),
                         sampling});
  return f;
}

// ---- flight with weather: three CSIs plus a state constraint on B ----

CausalGraph weather_graph(std::size_t x_card, std::size_t b_card) {
  return CausalGraph({hid("U1", 2), hid("U2", 2), hid("U3", 2), obs("X", x_card), obs("A", 2),
                      obs("B", b_card), obs("Y", 2)},
                     {{"U1", "X"}, {"U3", "X"}, {"U1", "A"}, {"U2", "A"}, {"X", "A"}, {"U2", "Y"},
                      {"U3", "Y"}, {"A", "Y"}, {"B", "Y"}});
}

std::vector<Constraint> weather_csis() {
  return {Csi{"A", {"U1"}, {{"X", "0"}}, {"U2"}}, Csi{"Y", {"U3"}, {{"B", "0"}}, {"U2", "A"}},
          Csi{"Y", {"A"}, {{"B", "1"}}, {"U2", "U3"}}};
}

Fixture weather() {
  Fixture f;
  f.id = "flight-weather";
  f.notes =
      "Flight delays with weather B (0 = raining, 1 = snowing) and X (0 = low-cost). "
      "First pair: B has a third state carrying mass 0.9, and Y depends on its parents only "
      "when B=2. It separates Pr_{X=0}(Y=0). Second pair: B restricted to two states, X "
      "ternary; it separates Pr_{X=1}(Y=1). Y follows A when B=0 and is uniform when B=1, so "
      "both members satisfy Y independent of A when B=1. The formula identifies Pr_{X=0}(Y) "
      "once B has two states.";

  {
    auto g = weather_graph(2, 3);
    auto common = [&](Cpt y) {
      return build_model(
          g, {uniform(g, "U1"), uniform(g, "U2"), uniform(g, "U3"),
              table(g, "X", [](Row p, std::size_t x) { return indicator(x == p[1]); }),
              table(g, "A", [](Row p, std::size_t a) { return indicator(a == (p[1] ^ p[2])); }),
              table(g, "B", [](Row, std::size_t b) { return b == 2 ? Rat(9, 10) : Rat(1, 20); }), std::move(y)});
    };
    // Y parents: U2, U3, A, B
    auto a = common(table(g, "Y", [](Row p, std::size_t y) {
      if (p[3] < 2) return Rat(1, 2);
      return near(y == (p[0] ^ p[2] ^ p[1]));
    }));
    auto b = common(table(g, "Y", [](Row p, std::size_t y) {
      if (p[3] < 2) return Rat(1, 2);
      return near(y == 0);
    }));
    f.pairs.push_back({"weather pair (ternary B)", a, b, weather_csis(), {{"X", "0"}}, {{"Y", "0"}},
                       Expectation::Separated});
  }
  {
    auto g = weather_graph(3, 2);
    auto common = [&](Cpt a_cpt) {
      return build_model(g, {uniform(g, "U1"), uniform(g, "U2"), uniform(g, "U3"),
                             table(g, "X",
                                   [](Row p, std::size_t x) {
                                     if (x == 0) return Rat(1, 20);
                                     return x == 1 + p[0] ? Rat(19, 20) : Rat(0);
                                   }),
                             std::move(a_cpt), uniform(g, "B"),
                             table(g, "Y", [](Row p, std::size_t y) {
                               if (p[3] == 1) return Rat(1, 2);
                               return near(y == p[2]);
                             })});
    };
    // A parents: U1, U2, X
    auto a = common(table(g, "A", [](Row p, std::size_t a) {
      if (p[2] == 0) return Rat(1, 2);
      return near(a == ((p[2] - 1) ^ p[0]));
    }));
    auto b = common(table(g, "A", [](Row p, std::size_t a) {
      if (p[2] == 0) return Rat(1, 2);
      return near(a == 0);
    }));
    auto cs = weather_csis();
    cs.push_back(StateDomain{"B", {"0", "1"}});
    f.pairs.push_back({"weather pair (binary B, ternary X)", a, b, cs, {{"X", "1"}}, {{"Y", "1"}},
                       Expectation::Separated});
  }

  auto sampling = weather_csis();
  sampling.push_back(StateDomain{"B", {"0", "1"}});
  f.estimands.push_back({"sum_{A} (P(A | X=0) * P(Y=$y | A, B=0, X=0)) * P(B=0) + P(Y=$y, B=1)",
                         {{"X", "0"}},
                         {{"Y", "$y"}},
                         grid({"y"}, 2),
                         true,
                         weather_graph(2, 2),
                         sampling});
  return f;
}

// ---- hospital: two CFDs plus a state constraint on B ----

CausalGraph hospital_graph(std::size_t b_card, std::size_t de_card) {
  return CausalGraph({obs("A", 2), obs("B", b_card), obs("C", 2), hid("D", de_card), hid("E", de_card),
                      obs("X", 2), obs("F", 2), obs("Y", 2)},
                     {{"A", "D"}, {"B", "D"}, {"B", "E"}, {"C", "E"}, {"D", "X"}, {"D", "F"}, {"E", "F"},
                      {"X", "Y"}, {"E", "Y"}, {"F", "Y"}});
}

std::vector<Constraint> hospital_cfds() {
  return {Cfd{"D", {"A"}, {{"B", "0"}}}, Cfd{"E", {"C"}, {{"B", "1"}}}};
}

CertificatePair hospital_pair() {
  auto g = hospital_graph(3, 4);
  auto common = [&](Cpt y) {
    return build_model(
        g, {uniform(g, "A"), uniform(g, "B"), uniform(g, "C"),
            // D parents: A, B
            table(g, "D",
                  [](Row p, std::size_t d) {
                    if (p[1] == 0) return indicator(d == p[0]);
                    if (p[1] == 1) return d < 2 ? Rat(1, 2) : Rat(0);
                    return d >= 2 ? Rat(1, 2) : Rat(0);
                  }),
            // E parents: B, C
            table(g, "E",
                  [](Row p, std::size_t e) {
                    if (p[0] == 1) return indicator(e == p[1]);
                    if (p[0] == 0) return e < 2 ? Rat(1, 2) : Rat(0);
                    return e >= 2 ? Rat(1, 2) : Rat(0);
                  }),
            table(g, "X",
                  [](Row p, std::size_t x) {
                    if (p[0] < 2) return Rat(1, 2);
                    return indicator(x + 2 == p[0]);
                  }),
            // F parents: D, E
            table(g, "F",
                  [](Row p, std::size_t f) {
                    if (p[0] < 2 || p[1] < 2) return Rat(1, 2);
                    return indicator(f == ((p[0] - 2) ^ (p[1] - 2)));
                  }),
            std::move(y)});
  };
  // Y parents: X, E, F
  auto a = common(table(g, "Y", [](Row p, std::size_t y) {
    if (p[1] < 2) return Rat(1, 2);
    return near(y == ((p[1] - 2) ^ p[2] ^ p[0]));
  }));
  auto b = common(table(g, "Y", [](Row p, std::size_t y) {
    if (p[1] < 2) return Rat(1, 2);
    return near(y == 0);
  }));
  return {"hospital pair (ternary B)", a, b, hospital_cfds(), {{"X", "0"}}, {{"Y", "0"}}, Expectation::Separated};
}

Fixture hospital() {
  auto sampling = hospital_cfds();
  sampling.push_back(StateDomain{"B", {"0", "1"}});

  Fixture f;
  f.id = "hospital";
  f.notes =
      "Hospital example with hidden D, E and CFDs [A, B=0] -> D, [C, B=1] -> E (B: 0 = old). "
      "With a third state for B the pair separates Pr_{X=0}(Y=0). With B binary, Pr_X(Y) is "
      "the sum of the two c-component terms below, each carrying the factor Pr(B=b). The inner sum over X ranges over X and is distinct "
      "from the treatment placeholder $x.";
  f.pairs.push_back(hospital_pair());
  f.estimands.push_back(
      {"P(B=0) * sum_{A,C} (P(A) * P(C) * sum_{F} (P(F | A, B=0, C) * P(Y=$y | A, B=0, C, F, X=$x)))"
       " + P(B=1) * sum_{A,C} (P(A) * P(C) * sum_{F} (P(Y=$y | B=1, C, X=$x, F)"
       " * sum_{X} (P(F | A, B=1, C, X) * P(X | A, B=1))))",
       {{"X", "$x"}},
       {{"Y", "$y"}},
       grid({"x", "y"}, 2),
       true,
       hospital_graph(2, 3),
       sampling});
  return f;
}

// ---- immunity: hospital plus hidden G ----

CausalGraph immunity_graph(std::size_t g_card) {
  return CausalGraph({obs("A", 2), obs("B", 2), obs("C", 2), hid("D", 2), hid("E", 2), hid("G", g_card),
                      obs("X", 2), obs("F", 2), obs("Y", 2)},
                     {{"A", "D"}, {"B", "D"}, {"B", "E"}, {"C", "E"}, {"A", "G"}, {"C", "G"}, {"D", "X"},
                      {"G", "X"}, {"D", "F"}, {"E", "F"}, {"X", "Y"}, {"E", "Y"}, {"F", "Y"}, {"G", "Y"}});
}

std::vector<Constraint> immunity_constraints() {
  return {Cfd{"D", {"A"}, {{"B", "0"}}}, Cfd{"E", {"C"}, {{"B", "1"}}}, Cfd{"G", {"A"}, {{"C", "0"}}},
          StateDomain{"B", {"0", "1"}}};
}

Fixture immunity() {
  auto g = immunity_graph(4);
  auto common = [&](Cpt y) {
    return build_model(
        g, {uniform(g, "A"), uniform(g, "B"), uniform(g, "C"),
            table(g, "D",
                  [](Row p, std::size_t d) { return p[1] == 0 ? indicator(d == p[0]) : Rat(1, 2); }),
            table(g, "E",
                  [](Row p, std::size_t e) { return p[0] == 1 ? indicator(e == p[1]) : Rat(1, 2); }),
            // G parents: A, C
            table(g, "G",
                  [](Row p, std::size_t s) {
                    if (p[1] == 0) return indicator(s == p[0]);
                    return s >= 2 ? Rat(1, 2) : Rat(0);
                  }),
            // X parents: D, G
            table(g, "X",
                  [](Row p, std::size_t x) {
                    if (p[1] < 2) return Rat(1, 2);
                    return indicator(x + 2 == p[1]);
                  }),
            uniform(g, "F"), std::move(y)});
  };
  // Y parents: X, E, F, G
  auto a = common(table(g, "Y", [](Row p, std::size_t y) {
    if (p[3] < 2) return Rat(1, 2);
    return near(y == ((p[3] - 2) ^ p[0]));
  }));
  auto b = common(table(g, "Y", [](Row p, std::size_t y) {
    if (p[3] < 2) return Rat(1, 2);
    return near(y == 0);
  }));

  Fixture f;
  f.id = "immunity";
  f.notes =
      "Hospital example extended with hidden immunity G (four states) and the CFD [A, C=0] -> G "
      "(C: 0 = severe; X, Y: 0 = yes). With B binary the pair still separates "
      "Pr_{C=1,X=0}(Y=0), while the formula identifies Pr_{C=0,X=0}(Y=0) as "
      "Pr_{C=0,X=0}(Y=0,B=0) + Pr_{C=0,X=0}(Y=0,B=1). C is a treatment, so no Pr(C=0) factor "
      "appears; each term carries Pr(B=b).";
  f.pairs.push_back({"immunity pair", a, b, immunity_constraints(), {{"C", "1"}, {"X", "0"}}, {{"Y", "0"}},
                     Expectation::Separated});
  f.estimands.push_back(
      {"sum_{B} (P(B) * sum_{A} (P(A) * sum_{F} (P(F | A, B, C=0) * P(Y=0 | A, B, C=0, F, X=0))))",
       {{"C", "0"}, {"X", "0"}},
       {{"Y", "0"}},
       {{}},
       true,
       g,
       immunity_constraints()});
  return f;
}

// ---- demonstrations ----

Fixture elimination_demo() {
  Fixture f;
  f.id = "feliminate";
  f.notes =
      "Functional elimination of a variable under a CFD keeps every marginal consistent with "
      "the CFD context and makes each child CPT an observable conditional. Checked on sampled "
      "models of the flu graph (eliminate F, context C=0) and of the hospital graph (eliminate "
      "D with B=0, E with B=1).";
  auto hosp = hospital_graph(3, 4);
  f.eliminations.push_back({flu_graph(), flu_constraints(), "F", {{"C", "0"}}});
  f.eliminations.push_back({hosp, hospital_cfds(), "D", {{"B", "0"}}});
  f.eliminations.push_back({hosp, hospital_cfds(), "E", {{"B", "1"}}});
  return f;
}

Fixture extension_demo() {
  Fixture f;
  f.id = "extend-state";
  f.notes =
      "Adding a state to one variable keeps a certificate pair a certificate. Applied to the "
      "flu pair: hidden F, observed T outside the outcome, and the outcome R at its outcome "
      "state (effect scales by 1 - eps) and at the other state (effect unchanged). No fixture "
      "covers the semi-Markovian equivalence built on this step.";
  f.pairs.push_back(flu_pair());
  f.extensions = {{"F", "2", Rat(1, 3)}, {"T", "0", Rat(1, 2)}, {"R", "0", Rat(1, 4)}, {"R", "1", Rat(1, 4)}};
  return f;
}

}  // namespace

const std::vector<Fixture>& builtin_fixtures() {
  static const std::vector<Fixture> all = [] {
    return std::vector<Fixture>{salary(),   flu(),      flight(),           weather(),
                                hospital(), immunity(), elimination_demo(), extension_demo()};
  }();
  return all;
}

}  // namespace stateid
