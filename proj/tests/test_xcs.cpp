#include <gtest/gtest.h>

#include <cmath>

#include "xcsmd/xcs.hpp"

using namespace xcsmd;

namespace {

const BitString kState = BitString::parse("0101000011010000");
const std::string kAllHash(16, '#');

Classifier rule(const std::string& c, int action, double p = 10.0, double f = 0.01) {
  Classifier cl;
  cl.condition = Condition::parse(c);
  cl.action = action;
  cl.prediction = p;
  cl.fitness = f;
  return cl;
}

struct Fixture {
  Params p;
  Population pop;
  MemoryList ml{5};
  AliasingStateList asl;
  Rng rng{11};
  std::optional<AliasingJudge> judge;

  StepContext ctx(bool aliased) {
    judge.emplace(asl, rng, p.aliasing_decision, 16);
    return StepContext{&kState, &ml, &*judge, &asl, aliased, 0};
  }
};

}  // namespace

TEST(Population, MacroMergeAndRemoval) {
  Population pop;
  const Handle a = pop.insert(rule(kAllHash, 1));
  const Handle b = pop.insert(rule(kAllHash, 1));
  EXPECT_EQ(a, b);
  EXPECT_EQ(pop[a].numerosity, 2);
  EXPECT_EQ(pop.micro_size(), 2);
  EXPECT_EQ(pop.macro_size(), 1u);
  const Handle c = pop.insert(rule(kAllHash, 2));
  EXPECT_EQ(pop.macro_size(), 2u);
  pop.decrement(a);
  pop.decrement(a);
  EXPECT_FALSE(pop.alive(a));
  EXPECT_TRUE(pop.alive(c));
  EXPECT_EQ(pop.micro_size(), 1);
  const Handle d = pop.insert(rule(kAllHash, 3));
  EXPECT_FALSE(pop.alive(a));
  EXPECT_TRUE(pop.alive(d));
}

TEST(MatchSet, UsesExistingGeneralRules) {
  Fixture f;
  for (int a = 0; a < kActionCount; ++a) f.pop.insert(rule(kAllHash, a));
  const auto m = build_match_set(f.pop, f.ctx(false), f.p, f.rng);
  EXPECT_EQ(m.size(), 8u);
  EXPECT_EQ(f.pop.macro_size(), 8u);
}

TEST(MatchSet, AliasedStateCoversMemoryRules) {
  Fixture f;
  for (int a = 0; a < kActionCount; ++a) f.pop.insert(rule(kAllHash, a));
  f.ml.update(BitString::parse("0001000000000000"), kState);
  const auto m = build_match_set(f.pop, f.ctx(true), f.p, f.rng);
  ASSERT_EQ(m.size(), 8u);
  for (Handle h : m) {
    EXPECT_TRUE(f.pop[h].has_memory());
    EXPECT_EQ(f.pop[h].mp, 0);
  }
  EXPECT_EQ(f.pop.macro_size(), 16u);
}

TEST(MatchSet, AliasedStateWithEmptyMemoryStaysMemoryless) {
  Fixture f;
  for (int a = 0; a < kActionCount; ++a) f.pop.insert(rule(kAllHash, a));
  const auto m = build_match_set(f.pop, f.ctx(true), f.p, f.rng);
  EXPECT_EQ(m.size(), 8u);
  for (Handle h : m) EXPECT_FALSE(f.pop[h].has_memory());
}

TEST(MatchSet, CoveringFillsMissingActionsOnly) {
  Fixture f;
  f.pop.insert(rule(kAllHash, 2));
  f.pop.insert(rule("1###############", 3));  // does not match
  const auto m = build_match_set(f.pop, f.ctx(false), f.p, f.rng);
  std::array<int, 8> per{};
  for (Handle h : m) ++per[f.pop[h].action];
  for (int a = 0; a < 8; ++a) EXPECT_EQ(per[a], 1) << a;
  for (Handle h : m) {
    const Classifier& c = f.pop[h];
    EXPECT_TRUE(c.condition.matches(kState));
    if (c.action != 2) {
      EXPECT_DOUBLE_EQ(c.prediction, f.p.p_init);
      EXPECT_DOUBLE_EQ(c.fitness, f.p.f_init);
      EXPECT_EQ(c.numerosity, 1);
    }
  }
}

TEST(Covering, HashProbabilityExtremes) {
  Fixture f;
  f.p.p_hash = 0.0;
  EXPECT_EQ(make_covering(f.ctx(false), 4, f.p, f.rng, false).condition, Condition::exactly(kState));
  f.p.p_hash = 1.0;
  EXPECT_EQ(make_covering(f.ctx(false), 4, f.p, f.rng, false).condition, Condition::general(16));
}

TEST(PredictionArray, Examples) {
  Population pop;
  std::vector<Handle> m{pop.insert(rule(kAllHash, 0, 10.0))};
  EXPECT_DOUBLE_EQ(prediction_array(pop, m).value[0], 10.0);

  pop.clear();
  m = {pop.insert(rule("0###############", 1, 0.0, 0.5)), pop.insert(rule("#1##############", 1, 1000.0, 0.5))};
  EXPECT_DOUBLE_EQ(prediction_array(pop, m).value[1], 500.0);

  pop.clear();
  m = {pop.insert(rule("0###############", 2, 100.0, 0.9)), pop.insert(rule("#1##############", 2, 200.0, 0.1))};
  const PredictionArray pa = prediction_array(pop, m);
  EXPECT_NEAR(pa.value[2], 110.0, 1e-9);
  EXPECT_EQ(pa.defined_count(), 1);
  EXPECT_TRUE(std::isnan(pa.value[0]));
}

TEST(SelectAction, Examples) {
  PredictionArray pa;
  pa.defined[0] = pa.defined[3] = true;
  pa.value[0] = 5;
  pa.value[3] = 9;
  Rng rng(5);
  EXPECT_EQ(select_action(pa, false, rng), 3);
  pa.value[0] = 9;
  EXPECT_EQ(select_action(pa, false, rng), 0);  // tie goes to the lowest index

  int hits[8] = {};
  for (int i = 0; i < 10000; ++i) ++hits[select_action(pa, true, rng)];
  EXPECT_EQ(hits[0] + hits[3], 10000);
  EXPECT_NEAR(hits[0] / 10000.0, 0.5, 0.03);

  PredictionArray empty;
  EXPECT_THROW(select_action(empty, false, rng), Error);
  EXPECT_THROW(empty.max(), Error);
}

TEST(Payoff, Examples) {
  PredictionArray pa;
  pa.defined[4] = true;
  pa.value[4] = 100;
  EXPECT_NEAR(compute_payoff(0.0, pa, 0.71), 71.0, 1e-12);
  EXPECT_DOUBLE_EQ(compute_payoff(3.0, pa, 0.0), 3.0);
}

TEST(Accuracy, Table) {
  Params p;
  EXPECT_DOUBLE_EQ(accuracy(2.0, p), 1.0);
  EXPECT_DOUBLE_EQ(accuracy(5.0, p), 0.1);
  EXPECT_NEAR(accuracy(10.0, p), 0.003125, 1e-15);
}

TEST(Update, MamThenGeometricConvergence) {
  Params p;
  Rng rng(1);
  Population pop;
  const Handle h = pop.insert(rule(kAllHash, 0, 10.0));
  ActionSet as{{h}, 0, kState, false, 0.0};
  update_action_set(as, 500.0, pop, p, rng, false);
  // First update replaces the estimates outright.
  EXPECT_DOUBLE_EQ(pop[h].prediction, 500.0);
  EXPECT_DOUBLE_EQ(pop[h].error, 490.0);
  EXPECT_EQ(pop[h].experience, 1);
  for (int i = 0; i < 4; ++i) update_action_set(as, 500.0, pop, p, rng, false);
  // Past the averaging window the gap shrinks by (1 - beta) per update.
  pop[h].prediction = 400.0;
  update_action_set(as, 500.0, pop, p, rng, false);
  EXPECT_NEAR(pop[h].prediction, 420.0, 1e-9);
  update_action_set(as, 500.0, pop, p, rng, false);
  EXPECT_NEAR(pop[h].prediction, 436.0, 1e-9);
}

TEST(Update, ErrorUsesPriorPrediction) {
  Params p;
  Rng rng(1);
  Population pop;
  Classifier c = rule(kAllHash, 0, 100.0);
  c.experience = 10;
  c.error = 0.0;
  const Handle h = pop.insert(c);
  ActionSet as{{h}, 0, kState, false, 0.0};
  update_action_set(as, 200.0, pop, p, rng, false);
  EXPECT_NEAR(pop[h].error, 0.2 * 100.0, 1e-12);
  EXPECT_NEAR(pop[h].prediction, 120.0, 1e-12);
}

TEST(Ga, NotDueBeforeThreshold) {
  Params p;
  Rng rng(1);
  Population pop;
  Classifier c = rule(kAllHash, 0);
  c.timestamp = 100;
  const Handle h = pop.insert(c);
  ActionSet as{{h}, 0, kState, false, 0.0};
  run_ga(as, pop, 120, p, rng);
  EXPECT_EQ(pop.micro_size(), 1);
  EXPECT_EQ(pop[h].timestamp, 100);
  run_ga(as, pop, 126, p, rng);
  EXPECT_EQ(pop.micro_size(), 3);
  EXPECT_EQ(pop[h].timestamp, 126);
}

TEST(Ga, NoVariationCopiesParents) {
  Params p;
  p.chi = 0.0;
  p.mu = 0.0;
  p.ga_subsumption = false;
  Rng rng(1);
  Population pop;
  Classifier c = rule("01##11##########", 5, 300.0, 0.4);
  c.numerosity = 2;
  c.experience = 50;
  const Handle h = pop.insert(c);
  ActionSet as{{h}, 5, kState, false, 0.0};
  run_ga(as, pop, 1000, p, rng);
  EXPECT_EQ(pop.macro_size(), 1u);
  EXPECT_EQ(pop[h].numerosity, 4);
}

TEST(Ga, OffspringValues) {
  Params p;
  p.chi = 0.0;
  p.mu = 1.0;  // every symbol and the action change, so children stay distinct
  p.ga_subsumption = false;
  Rng rng(1);
  Population pop;
  Classifier a = rule("0101000011010000", 1, 300.0, 0.4);
  a.numerosity = 2;
  a.error = 7.0;
  a.experience = 60;
  a.fb_pos = 3.0;
  const Handle ha = pop.insert(a);
  ActionSet as{{ha}, 1, kState, false, 0.0};
  run_ga(as, pop, 1000, p, rng);
  EXPECT_EQ(pop.micro_size(), 4);
  int children = 0;
  pop.for_each([&](Handle h, const Classifier& c) {
    if (h == ha) return;
    children += c.numerosity;
    EXPECT_NE(c.action, 1);
    EXPECT_NEAR(c.fitness, 0.1 * 0.4 / 2, 1e-12);
    EXPECT_DOUBLE_EQ(c.prediction, 300.0);
    EXPECT_DOUBLE_EQ(c.error, 7.0);
    EXPECT_EQ(c.experience, 0);
    EXPECT_EQ(c.timestamp, 1000);
    EXPECT_DOUBLE_EQ(c.fb_pos, 0.0);
  });
  EXPECT_EQ(children, 2);
}

TEST(Ga, MemoryPointerClampsAtZero) {
  Params p;
  p.mu = 1.0;
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    Classifier c = rule(kAllHash, 0);
    c.memory = Condition::general(16);
    c.mp = 0;
    detail::mutate(c, p, rng);
    EXPECT_GE(c.mp, 0);
    EXPECT_LE(c.mp, 1);
    EXPECT_NE(c.action, 0);
  }
  for (int i = 0; i < 200; ++i) {
    Classifier c = rule(kAllHash, 0);
    c.memory = Condition::general(16);
    c.mp = p.memory_size - 1;
    detail::mutate(c, p, rng);
    EXPECT_LE(c.mp, p.memory_size - 1);
  }
}

TEST(Ga, SubsumedChildIncrementsParent) {
  Params p;
  p.chi = 0.0;
  p.mu = 0.0;
  Rng rng(1);
  Population pop;
  Classifier c = rule("0###############", 1, 300.0, 0.4);
  c.experience = 100;
  c.error = 1.0;
  const Handle h = pop.insert(c);
  ActionSet as{{h}, 1, kState, false, 0.0};
  run_ga(as, pop, 1000, p, rng);
  EXPECT_EQ(pop.macro_size(), 1u);
  EXPECT_EQ(pop[h].numerosity, 3);
  EXPECT_EQ(pop[h].experience, 100);
}

TEST(Deletion, NothingAtCapacity) {
  Params p;
  p.population_size = 3;
  Rng rng(1);
  Population pop;
  for (int a = 0; a < 3; ++a) pop.insert(rule(kAllHash, a));
  enforce_capacity(pop, p, rng);
  EXPECT_EQ(pop.micro_size(), 3);
}

TEST(Deletion, EqualVotesAreUniform) {
  Params p;
  Rng rng(2);
  int count[4] = {};
  for (int trial = 0; trial < 10000; ++trial) {
    Population pop;
    for (int a = 0; a < 4; ++a) pop.insert(rule(kAllHash, a));
    delete_one(pop, p, rng);
    for (int a = 0; a < 4; ++a) {
      Classifier probe = rule(kAllHash, a);
      if (!pop.find(probe)) ++count[a];
    }
  }
  for (int a = 0; a < 4; ++a) EXPECT_NEAR(count[a] / 10000.0, 0.25, 0.02);
}

TEST(Deletion, UnfitExperiencedRulesArePenalised) {
  Params p;
  Rng rng(3);
  int weak = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    Population pop;
    for (int a = 0; a < 3; ++a) pop.insert(rule(kAllHash, a, 10.0, 0.5));
    Classifier poor = rule(kAllHash, 3, 10.0, 0.001);
    poor.experience = 100;
    pop.insert(poor);
    delete_one(pop, p, rng);
    if (!pop.find(rule(kAllHash, 3))) ++weak;
  }
  EXPECT_GT(weak / static_cast<double>(trials), 0.5);
}

TEST(Subsumption, ActionSetAbsorbsSpecificRules) {
  Params p;
  p.as_subsumption = true;
  Rng rng(1);
  Population pop;
  Classifier g = rule("0###############", 1);
  g.experience = 40;
  g.error = 1.0;
  const Handle hg = pop.insert(g);
  Classifier s = rule("01##############", 1);
  s.numerosity = 3;
  const Handle hs = pop.insert(s);
  ActionSet as{{hg, hs}, 1, kState, false, 0.0};
  action_set_subsumption(as, pop, p, rng);
  EXPECT_FALSE(pop.alive(hs));
  EXPECT_EQ(pop[hg].numerosity, 4);
  EXPECT_EQ(as.members.size(), 1u);
}
