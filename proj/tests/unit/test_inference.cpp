#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "oracle.hpp"
#include "stateid/gallery.hpp"
#include "stateid/inference.hpp"

using namespace stateid;
using testing_models::chain;
using testing_models::confounded;

TEST(Inference, TwoFairCoins) {
  CausalGraph g({numbered_variable("A", 2), numbered_variable("B", 2)}, {});
  auto m = build_model(g, {testing_models::root_cpt("A", {Rat(1, 2), Rat(1, 2)}),
                           testing_models::root_cpt("B", {Rat(1, 2), Rat(1, 2)})});
  auto j = joint(m);
  ASSERT_EQ(j.size(), 4u);
  for (const auto& v : j.values()) EXPECT_EQ(v, Rat(1, 4));
}

TEST(Inference, KernelMatchesSerialAndOracle) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 40; ++i) {
    auto m = oracle::random_model(rng, {.max_vars = 6});
    auto par = joint(m);
    auto ser = joint_reference(m);
    ASSERT_EQ(par.values(), ser.values());
    for (std::size_t k = 0; k < ser.size(); ++k) EXPECT_EQ(ser.values()[k], oracle::prob(m, ser.instantiation(k)));
    EXPECT_TRUE(ser.total().is_one());
  }
}

TEST(Inference, MarginalAndObservational) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 30; ++i) {
    auto m = oracle::random_model(rng);
    auto obs = observational(m);
    auto table = oracle::observed_table(m);
    ASSERT_EQ(obs.values(), table);
    EXPECT_EQ(obs.scope_names(), m.graph().observed_names());
    auto names = m.graph().names();
    auto all = marginal(m, names);
    EXPECT_TRUE(dist_equal(all, joint(m)));
    auto last = marginal(m, {names.back()});
    for (std::size_t k = 0; k < last.size(); ++k)
      EXPECT_EQ(last.values()[k], oracle::prob(m, last.instantiation(k)));
  }
}

TEST(Inference, ConditionalIsRatioOfMarginals) {
  auto m = chain(Rat(1, 3), Rat(1, 4), Rat(3, 4));
  EXPECT_EQ(conditional(m, {{"Y", "1"}}, {{"X", "1"}}), Rat(3, 4));
  EXPECT_EQ(conditional(m, {{"X", "1"}}, {{"Y", "1"}}), Rat(1, 3) * Rat(3, 4) / (Rat(2, 3) * Rat(1, 4) + Rat(1, 3) * Rat(3, 4)));
  EXPECT_TRUE(conditional(m, {{"X", "1"}}, {{"X", "1"}}).is_one());
  EXPECT_TRUE(conditional(m, {{"X", "0"}}, {{"X", "1"}}).is_zero());
  auto det = chain(Rat(0), Rat(1, 2), Rat(1, 2));
  EXPECT_ERRC(conditional(det, {{"Y", "1"}}, {{"X", "1"}}), ZeroConditioningEvent);
}

TEST(Inference, InterveneMutilates) {
  auto m = confounded(Rat(1, 2), Rat(1, 5), Rat(4, 5), {Rat(1, 10), Rat(1, 2), Rat(3, 10), Rat(9, 10)});
  auto mx = intervene(m, {{"X", "1"}});
  const auto& g = mx.graph();
  EXPECT_TRUE(g.parents(g.index_of("X")).empty());
  EXPECT_EQ(mx.cpt("X").table(), (std::vector<Rat>{Rat(0), Rat(1)}));
  EXPECT_EQ(mx.cpt("Y"), m.cpt("Y"));
  EXPECT_EQ(mx.cpt("U"), m.cpt("U"));
  // Pr_{X=1}(Y=1) = sum_u Pr(u) f(Y=1 | u, X=1)
  EXPECT_EQ(causal_effect(m, {{"X", "1"}}, {{"Y", "1"}}), Rat(1, 2) * Rat(1, 2) + Rat(1, 2) * Rat(9, 10));
  EXPECT_ERRC(intervene(m, {{"X", "7"}}), UnknownState);
  EXPECT_ERRC(intervene(m, {{"Q", "0"}}), UnknownVariable);
}

TEST(Inference, CausalEffectMatchesTruncatedFactorization) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 60; ++i) {
    auto m = oracle::random_model(rng);
    const auto& g = m.graph();
    std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
    auto xv = pick(rng), yv = pick(rng);
    auto x = oracle::random_instantiation(rng, g, {xv});
    auto y = oracle::random_instantiation(rng, g, {yv});
    EXPECT_EQ(causal_effect(m, x, y), oracle::effect(m, x, y)) << x.str() << " -> " << y.str();
  }
}

TEST(Inference, EffectOfTreatmentOnItself) {
  auto m = chain(Rat(1, 3), Rat(1, 4), Rat(3, 4));
  EXPECT_TRUE(causal_effect(m, {{"X", "1"}}, {{"X", "1"}}).is_one());
  EXPECT_TRUE(causal_effect(m, {{"X", "1"}}, {{"X", "0"}}).is_zero());
  // no confounding: Pr_x(y) = Pr(y | x)
  EXPECT_EQ(causal_effect(m, {{"X", "0"}}, {{"Y", "1"}}), conditional(m, {{"Y", "1"}}, {{"X", "0"}}));
}

TEST(Inference, StateSpaceCap) {
  std::mt19937_64 rng(14);
  auto m = oracle::random_model(rng, {.min_vars = 5, .max_vars = 5, .max_card = 3});
  InferenceOptions tiny{.max_states = 4};
  EXPECT_ERRC(joint(m, tiny), StateSpaceTooLarge);
  EXPECT_ERRC(joint_reference(m, tiny), StateSpaceTooLarge);
  EXPECT_ERRC(observational(m, tiny), StateSpaceTooLarge);
}

TEST(Inference, DistOperations) {
  auto m = chain(Rat(1, 3), Rat(1, 4), Rat(3, 4));
  auto j = joint(m);
  auto r = j.reordered({"Y", "X"});
  EXPECT_EQ(r.scope_names(), (std::vector<std::string>{"Y", "X"}));
  EXPECT_TRUE(dist_equal(r, j));
  EXPECT_EQ(j.probability({{"Y", "1"}}), j.marginalize({"Y"}).at({{"Y", "1"}}));
  EXPECT_ERRC(j.probability({{"Z", "1"}}), UnknownVariable);
  EXPECT_ERRC(marginal(m, {}), ScopeMismatch);
  EXPECT_ERRC(marginal(m, {"Q"}), UnknownVariable);
  EXPECT_ERRC(dist_equal(j, j.marginalize({"X"})), ScopeMismatch);
  EXPECT_TRUE(strictly_positive(j));
  EXPECT_FALSE(strictly_positive(joint(chain(Rat(1, 2), Rat(0), Rat(1, 2)))));
}

TEST(Inference, SalaryMarginalOfJ) {
  const auto& p = builtin_fixture("salary").pairs.at(0);
  auto mj = marginal(p.model_a, {"J"});
  EXPECT_EQ(mj.at({{"J", "0"}}), Rat(1, 100));
  EXPECT_EQ(mj.at({{"J", "0"}}), oracle::prob(p.model_a, {{"J", "0"}}));
  EXPECT_EQ(conditional(p.model_a, {{"S", "0"}}, {{"Y", "0"}, {"J", "0"}}), Rat(1, 2));
}

TEST(Inference, FluObservedFamilies) {
  const auto& p = builtin_fixture("flu").pairs.at(0);
  for (const auto* m : {&p.model_a, &p.model_b}) {
    auto obs = marginal(*m, {"C", "T", "D", "R"});
    for (const char* t : {"0", "1"})
      for (const char* d : {"0", "1"}) {
        EXPECT_EQ(obs.at({{"C", "0"}, {"T", t}, {"D", d}, {"R", "0"}}), Rat(1, 16));
        EXPECT_EQ(obs.at({{"C", "0"}, {"T", t}, {"D", d}, {"R", "1"}}), Rat(1, 16));
        EXPECT_EQ(obs.at({{"C", "1"}, {"T", t}, {"D", d}, {"R", "0"}}), Rat(99, 800));
        EXPECT_EQ(obs.at({{"C", "1"}, {"T", t}, {"D", d}, {"R", "1"}}), Rat(1, 800));
      }
  }
}
