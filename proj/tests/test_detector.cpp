#include <gtest/gtest.h>

#include "xcsmd/aliasing_detector.hpp"

using namespace xcsmd;

namespace {

const BitString kState = BitString::parse("0101000011010000");
const BitString kOther = BitString::parse("0001000000000001");

Classifier specific(const BitString& s, int action) {
  Classifier cl;
  cl.condition = Condition::exactly(s);
  cl.action = action;
  return cl;
}

}  // namespace

TEST(CriticalError, Examples) {
  EXPECT_DOUBLE_EQ(critical_error(0.0, 100.0, 71.0, 0.71), 0.0);
  EXPECT_NEAR(critical_error(0.0, 100.0, 50.0, 0.71), 21.0, 1e-12);
  EXPECT_DOUBLE_EQ(critical_error(1000.0, 0.0, 1000.0, 0.71), 0.0);
}

TEST(Feedback, OnlyFullySpecificRulesAccumulate) {
  Population pop;
  const Handle hs = pop.insert(specific(kState, 2));
  Classifier general = specific(kState, 2);
  general.condition = general.condition.with_symbol(0, '#');
  const Handle hg = pop.insert(general);
  ActionSet as{{hs, hg}, 2, kState, false, 0.0};
  update_feedback(as, 30.0, pop);
  update_feedback(as, -10.0, pop);
  update_feedback(as, 0.0, pop);
  EXPECT_DOUBLE_EQ(pop[hs].fb_pos, 30.0);
  EXPECT_DOUBLE_EQ(pop[hs].fb_neg, 10.0);
  EXPECT_DOUBLE_EQ(pop[hs].stable_feedback(), 0.5);
  EXPECT_DOUBLE_EQ(pop[hg].fb_pos + pop[hg].fb_neg, 0.0);
}

TEST(Feedback, SingleSignedIsStable) {
  Population pop;
  const Handle h = pop.insert(specific(kState, 1));
  ActionSet as{{h}, 1, kState, false, 0.0};
  for (int i = 1; i <= 20; ++i) update_feedback(as, i * 1.5, pop);
  EXPECT_DOUBLE_EQ(pop[h].stable_feedback(), 1.0);
}

TEST(DetectAsr, RuleConditions) {
  Params p;
  Classifier c = specific(kState, 0);
  c.experience = 31;
  c.fb_pos = 6;
  c.fb_neg = 4;  // v = 0.2
  EXPECT_TRUE(satisfies_asr_rule(c, p));
  c.experience = 30;
  EXPECT_FALSE(satisfies_asr_rule(c, p));
  c.experience = 31;
  c.fb_pos = 8;
  c.fb_neg = 2;  // v = 0.6
  EXPECT_FALSE(satisfies_asr_rule(c, p));
  c.fb_pos = c.fb_neg = 5;
  c.condition = c.condition.with_symbol(3, '#');
  EXPECT_DOUBLE_EQ(c.specificity(), 15.0 / 16.0);
  EXPECT_FALSE(satisfies_asr_rule(c, p));
}

TEST(DetectAsr, RecognisedRuleVotesAndLeaves) {
  Params p;
  Population pop;
  AliasingStateList asl;
  Classifier c = specific(kState, 0);
  c.experience = 31;
  c.fb_pos = 6;
  c.fb_neg = 4;
  const Handle h = pop.insert(c);
  const Handle keep = pop.insert(specific(kOther, 0));
  ActionSet as{{h, keep}, 0, kState, false, 0.0};
  EXPECT_EQ(detect_asr(as, asl, pop, p), 1);
  EXPECT_EQ(asl.num(kState), 1);
  EXPECT_FALSE(pop.alive(h));
  EXPECT_TRUE(pop.alive(keep));
  EXPECT_EQ(as.members.size(), 1u);
}

TEST(DetectAsr, MemoryRuleNeedsListedState) {
  Params p;
  Population pop;
  AliasingStateList asl;
  Classifier c = specific(kState, 0);
  c.memory = Condition::exactly(kOther);
  c.mp = 0;
  c.experience = 31;
  c.fb_pos = c.fb_neg = 1;
  const Handle h = pop.insert(c);
  ActionSet as{{h}, 0, kState, true, 0.0};
  EXPECT_EQ(detect_asr(as, asl, pop, p), 0);
  EXPECT_TRUE(asl.empty());
  EXPECT_TRUE(pop.alive(h));

  asl.insert(kState);
  EXPECT_EQ(detect_asr(as, asl, pop, p), 1);
  EXPECT_EQ(asl.num(kOther), 1);
  EXPECT_EQ(asl.num(kState), 1);
  EXPECT_FALSE(pop.alive(h));
}

TEST(AliasingStateList, InsertAndHalf) {
  AliasingStateList asl;
  EXPECT_THROW(asl.num_half(), Error);
  asl.insert(kState);
  asl.insert(kState);
  EXPECT_EQ(asl.num(kState), 2);
  asl.insert(kOther);
  EXPECT_EQ(asl.size(), 2u);
  EXPECT_EQ(asl.num(kOther), 1);

  AliasingStateList single;
  for (int i = 0; i < 7; ++i) single.insert(kState);
  EXPECT_DOUBLE_EQ(single.num_half(), 7.0);

  AliasingStateList pair;
  for (int i = 0; i < 10; ++i) pair.insert(kState);
  for (int i = 0; i < 2; ++i) pair.insert(kOther);
  EXPECT_DOUBLE_EQ(pair.num_half(), 6.0);

  AliasingStateList flat;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 5; ++i) flat.insert(BitString(16, static_cast<std::uint32_t>(k)));
  EXPECT_DOUBLE_EQ(flat.num_half(), 5.0);
}

TEST(AliasingStateList, Dump) {
  AliasingStateList asl;
  asl.insert(kOther);
  asl.insert(kState);
  asl.insert(kState);
  EXPECT_EQ(asl.dump(), kState.to_string() + " 2\n" + kOther.to_string() + " 1\n");
}

TEST(IsAliasing, Frequencies) {
  AliasingStateList asl;
  Rng rng(4);
  EXPECT_FALSE(asl.is_aliasing(kState, rng));
  for (int i = 0; i < 9; ++i) asl.insert(kOther);
  for (int i = 0; i < 3; ++i) asl.insert(kState);
  asl.insert(BitString(16, 77));
  asl.insert(BitString(16, 77));  // num_half = (9 + 2) / 2 = 5.5
  ASSERT_DOUBLE_EQ(asl.num_half(), 5.5);
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(asl.is_aliasing(kOther, rng));
  for (int i = 0; i < 1000; ++i) EXPECT_FALSE(asl.is_aliasing(BitString(16, 5), rng));

  AliasingStateList half;
  for (int i = 0; i < 9; ++i) half.insert(kOther);
  for (int i = 0; i < 3; ++i) half.insert(kState);  // num_half = 6
  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += half.is_aliasing(kState, rng);
  EXPECT_NEAR(hits / 10000.0, 0.5, 0.02);
  EXPECT_FALSE(half.is_aliasing(kState, rng, AliasingDecision::Deterministic));
  EXPECT_TRUE(half.is_aliasing(kOther, rng, AliasingDecision::Deterministic));
}

TEST(Judge, OneVerdictPerStep) {
  AliasingStateList asl;
  for (int i = 0; i < 9; ++i) asl.insert(kOther);
  for (int i = 0; i < 3; ++i) asl.insert(kState);
  Rng rng(8);
  AliasingJudge judge(asl, rng, AliasingDecision::Probabilistic, 16);
  int changes = 0;
  bool last = judge(kState);
  for (int step = 0; step < 200; ++step) {
    judge.new_step();
    const bool v = judge(kState);
    for (int i = 0; i < 5; ++i) EXPECT_EQ(judge(kState), v);
    EXPECT_EQ(judge(kState.append(5, kActionBits)), v);
    changes += v != last;
    last = v;
  }
  EXPECT_GT(changes, 20);
}

struct AsCoverFixture {
  Params p;
  Population pop;
  MemoryList ml{5};
  AliasingStateList asl;
  Rng rng{3};
  std::optional<AliasingJudge> judge;
  StepContext ctx(bool aliased) {
    judge.emplace(asl, rng, p.aliasing_decision, 16);
    return StepContext{&kState, &ml, &*judge, &asl, aliased, 0};
  }
};

TEST(ActionSetCovering, SkippedWhenAnAccurateExperiencedMemberExists) {
  AsCoverFixture f;
  Classifier c = specific(kState, 3);
  c.condition = Condition::general(16);
  c.error = 0.0;
  c.experience = 21;
  const Handle h = f.pop.insert(c);
  ActionSet as{{h}, 3, kState, false, 0.0};
  EXPECT_FALSE(action_set_covering(as, f.ctx(false), f.pop, f.p, f.rng));
  EXPECT_EQ(f.pop.macro_size(), 1u);

  f.pop[h].experience = 20;
  EXPECT_TRUE(action_set_covering(as, f.ctx(false), f.pop, f.p, f.rng));
  EXPECT_EQ(f.pop.macro_size(), 2u);
  ASSERT_EQ(as.members.size(), 2u);
  const Classifier& added = f.pop[as.members[1]];
  EXPECT_TRUE(added.fully_specific());
  EXPECT_FALSE(added.has_memory());
  EXPECT_EQ(added.condition, Condition::exactly(kState));
  EXPECT_EQ(added.action, 3);

  // A second call finds the same rule already present and leaves it alone.
  EXPECT_FALSE(action_set_covering(as, f.ctx(false), f.pop, f.p, f.rng));
  EXPECT_EQ(f.pop[as.members[1]].numerosity, 1);
}

TEST(ActionSetCovering, AliasedStateGetsMemoryRule) {
  AsCoverFixture f;
  f.ml.update(kOther, kState);
  ActionSet as{{}, 6, kState, true, 0.0};
  EXPECT_TRUE(action_set_covering(as, f.ctx(true), f.pop, f.p, f.rng));
  ASSERT_EQ(as.members.size(), 1u);
  const Classifier& c = f.pop[as.members[0]];
  EXPECT_TRUE(c.has_memory());
  EXPECT_EQ(c.mp, 0);
  EXPECT_EQ(*c.memory, Condition::exactly(kOther));
  EXPECT_TRUE(c.fully_specific());
}

TEST(FitnessFloor, Examples) {
  Population pop;
  Classifier low = specific(kState, 0);
  low.fitness = 0.001;
  Classifier high = specific(kState, 1);
  high.fitness = 0.9;
  Classifier general = specific(kState, 2);
  general.condition = Condition::general(16);
  general.fitness = 0.0;
  const Handle hl = pop.insert(low);
  const Handle hh = pop.insert(high);
  const Handle hg = pop.insert(general);
  for (int i = 0; i < 2; ++i) {
    Classifier filler = specific(BitString(16, static_cast<std::uint32_t>(100 + i)), 4);
    filler.condition = filler.condition.with_symbol(0, '#');
    filler.fitness = 0.25;
    pop.insert(filler);
  }
  const double mean = pop.mean_fitness();
  EXPECT_NEAR(mean, (0.001 + 0.9 + 0.0 + 0.5) / 5.0, 1e-12);
  ActionSet as{{hl, hh, hg}, 0, kState, false, 0.0};
  apply_fitness_floor(as, pop);
  EXPECT_DOUBLE_EQ(pop[hl].fitness, mean);
  EXPECT_DOUBLE_EQ(pop[hh].fitness, 0.9);
  EXPECT_DOUBLE_EQ(pop[hg].fitness, 0.0);
}
