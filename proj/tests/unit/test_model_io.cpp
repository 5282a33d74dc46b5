#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "oracle.hpp"
#include "stateid/model_io.hpp"

using namespace stateid;

TEST(ModelIo, RoundTripRandomModels) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 25; ++i) {
    auto m = oracle::random_model(rng);
    auto text = write_model(m);
    auto doc = read_model(text);
    EXPECT_EQ(doc.model, m);
    EXPECT_TRUE(doc.constraints.empty());
    EXPECT_EQ(write_model(doc.model), text);
  }
}

TEST(ModelIo, ConstraintsRoundTrip) {
  std::vector<Constraint> cs{
      Csi{"S", {"D"}, Instantiation{{"J", "0"}}, {"Y"}},
      Cfd{"F", {"T"}, Instantiation{{"C", "0"}}},
      Fd{"X"},
      StateDomain{"B", {"0", "1"}},
  };
  auto j = constraints_to_json(cs);
  EXPECT_EQ(constraints_from_json(j), cs);
  EXPECT_EQ(constraints_from_json(Json{{"constraints", j}}), cs);
  EXPECT_EQ(j[0]["type"], "csi");
  EXPECT_EQ(j[1]["type"], "cfd");
}

TEST(ModelIo, DecimalAndFractionProbabilities) {
  const char* text = R"({
    "variables": [{"name": "X", "states": ["a", "b"]}],
    "edges": [],
    "cpts": {"X": {"parents": [], "rows": [{"given": {}, "dist": {"a": "0.25", "b": "3/4"}}]}}
  })";
  auto doc = read_model(text);
  EXPECT_EQ(doc.model.cpt(0).at(0, 0), Rat(1, 4));
  EXPECT_EQ(doc.model.cpt(0).at(0, 1), Rat(3, 4));
  EXPECT_TRUE(doc.model.graph().variable(0).observed);
}

TEST(ModelIo, RowsMayComeInAnyOrder) {
  const char* text = R"({
    "variables": [{"name": "X", "states": ["0", "1"]}, {"name": "Y", "states": ["0", "1"]}],
    "edges": [["X", "Y"]],
    "cpts": {
      "X": {"parents": [], "rows": [{"given": {}, "dist": {"1": "1/3", "0": "2/3"}}]},
      "Y": {"parents": ["X"], "rows": [
        {"given": {"X": "1"}, "dist": {"0": "1/5", "1": "4/5"}},
        {"given": {"X": "0"}, "dist": {"0": "1", "1": "0"}}]}
    }
  })";
  auto m = read_model(text).model;
  EXPECT_EQ(m.cpt("Y").at(1, 1), Rat(4, 5));
  EXPECT_EQ(m.cpt("Y").at(0, 0), Rat(1));
  EXPECT_EQ(m.cpt("X").at(0, 1), Rat(1, 3));
}

TEST(ModelIo, Errors) {
  EXPECT_ERRC(read_model("{"), FileFormat);
  EXPECT_ERRC(read_model(R"({"edges": []})"), FileFormat);
  const char* missing_row = R"({
    "variables": [{"name": "X", "states": ["0", "1"]}, {"name": "Y", "states": ["0", "1"]}],
    "edges": [["X", "Y"]],
    "cpts": {
      "X": {"parents": [], "rows": [{"given": {}, "dist": {"0": "1/2", "1": "1/2"}}]},
      "Y": {"parents": ["X"], "rows": [{"given": {"X": "0"}, "dist": {"0": "1", "1": "0"}}]}
    }
  })";
  EXPECT_ERRC(read_model(missing_row), FileFormat);
  const char* bad_sum = R"({
    "variables": [{"name": "X", "states": ["0", "1"]}],
    "cpts": {"X": {"parents": [], "rows": [{"given": {}, "dist": {"0": "1/2", "1": "1/3"}}]}}
  })";
  EXPECT_ERRC(read_model(bad_sum), RowSumNotOne);
  const char* float_prob = R"({
    "variables": [{"name": "X", "states": ["0", "1"]}],
    "cpts": {"X": {"parents": [], "rows": [{"given": {}, "dist": {"0": 0.5, "1": 0.5}}]}}
  })";
  EXPECT_ERRC(read_model(float_prob), FileFormat);
  const char* no_cpt = R"({"variables": [{"name": "X", "states": ["0", "1"]}], "cpts": {}})";
  EXPECT_ERRC(read_model(no_cpt), MissingCpt);
  const char* cycle = R"({"variables": [{"name": "X", "states": ["0", "1"]}, {"name": "Y", "states": ["0", "1"]}],
    "edges": [["X", "Y"], ["Y", "X"]], "cpts": {}})";
  EXPECT_ERRC(read_model(cycle), CycleDetected);
  EXPECT_ERRC(constraint_from_json(Json{{"type", "bogus"}}), FileFormat);
}
