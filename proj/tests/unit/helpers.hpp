#pragma once

#include <gtest/gtest.h>

#include "stateid/error.hpp"
#include "stateid/model.hpp"

// Expects `stmt` to throw stateid::Error with the given code.
#define EXPECT_ERRC(stmt, errc)                                                  \
  do {                                                                           \
    try {                                                                        \
      stmt;                                                                      \
      ADD_FAILURE() << "expected " << stateid::errc_name(stateid::Errc::errc);   \
    } catch (const stateid::Error& e_) {                                         \
      EXPECT_EQ(e_.code(), stateid::Errc::errc) << e_.what();                    \
    }                                                                            \
  } while (0)

namespace testing_models {

using stateid::Rat;

inline stateid::Cpt root_cpt(const std::string& name, std::vector<Rat> dist) {
  auto n = dist.size();
  return stateid::Cpt(name, {}, {}, n, std::move(dist));
}

// X -> Y with Pr(X=1) = px, f(Y=1 | X=x) = py[x].
inline stateid::Cbn chain(Rat px, Rat py0, Rat py1) {
  using stateid::numbered_variable;
  stateid::CausalGraph g({numbered_variable("X", 2), numbered_variable("Y", 2)}, {{"X", "Y"}});
  std::vector<stateid::Cpt> cpts;
  cpts.push_back(root_cpt("X", {Rat(1) - px, px}));
  cpts.emplace_back("Y", std::vector<std::string>{"X"}, std::vector<std::size_t>{2}, 2,
                    std::vector<Rat>{Rat(1) - py0, py0, Rat(1) - py1, py1});
  return stateid::build_model(std::move(g), std::move(cpts));
}

// Hidden U confounds X -> Y.
inline stateid::Cbn confounded(Rat pu, Rat px0, Rat px1, std::vector<Rat> py) {
  using stateid::numbered_variable;
  stateid::CausalGraph g({numbered_variable("U", 2, false), numbered_variable("X", 2), numbered_variable("Y", 2)},
                         {{"U", "X"}, {"U", "Y"}, {"X", "Y"}});
  std::vector<stateid::Cpt> cpts;
  cpts.push_back(root_cpt("U", {Rat(1) - pu, pu}));
  cpts.emplace_back("X", std::vector<std::string>{"U"}, std::vector<std::size_t>{2}, 2,
                    std::vector<Rat>{Rat(1) - px0, px0, Rat(1) - px1, px1});
  std::vector<Rat> t;
  for (auto& p : py) {
    t.push_back(Rat(1) - p);
    t.push_back(p);
  }
  cpts.emplace_back("Y", std::vector<std::string>{"U", "X"}, std::vector<std::size_t>{2, 2}, 2, std::move(t));
  return stateid::build_model(std::move(g), std::move(cpts));
}

}  // namespace testing_models
