#include <gtest/gtest.h>

#include "xcsmd/maze.hpp"
#include "xcsmd/memory_list.hpp"

using namespace xcsmd;

namespace {

BitString state(int k) { return BitString(16, static_cast<std::uint32_t>(k)); }

}  // namespace

TEST(MemoryList, Update) {
  MemoryList ml(5);
  ml.update(state(1), state(1));
  EXPECT_TRUE(ml.empty());

  ml.update(state(1), state(2));
  ASSERT_EQ(ml.size(), 1u);
  EXPECT_EQ(ml[0], state(1));

  for (int k = 2; k <= 6; ++k) ml.update(state(k), state(k + 1));
  ASSERT_EQ(ml.size(), 5u);
  EXPECT_EQ(ml[0], state(6));
  EXPECT_EQ(ml[4], state(2));

  const auto before = ml.elements();
  ml.update(state(9), state(9));
  EXPECT_EQ(ml.elements(), before);
}

TEST(MemoryList, UpdateWithAction) {
  MemoryList ml(3);
  const BitString elem = state(5).append(3, kActionBits);
  ml.update_with(elem, state(5), state(6));
  ASSERT_EQ(ml.size(), 1u);
  EXPECT_EQ(ml[0].length(), 19);
  EXPECT_EQ(ml[0].prefix(16), state(5));
  ml.update_with(elem, state(6), state(6));
  EXPECT_EQ(ml.size(), 1u);
}

TEST(MemoryList, Reset) {
  MemoryList ml(5);
  ml.reset();
  EXPECT_TRUE(ml.empty());
  ml.update(state(1), state(2));
  ml.reset();
  EXPECT_TRUE(ml.empty());
  EXPECT_FALSE(ml.has(0));
}

TEST(CoverMemory, FirstNonAliasing) {
  MemoryList ml(5);
  ml.update(state(3), state(4));
  ml.update(state(2), state(4));
  ml.update(state(1), state(4));  // ml = [1, 2, 3]
  AliasingStateList asl;
  Rng rng(1);
  auto none = [](const BitString&) { return false; };
  EXPECT_EQ(cover_memory_condition(ml, none, asl, rng, 0.0).mp, 0);

  auto first = [](const BitString& s) { return s == state(1); };
  const MemoryCover c = cover_memory_condition(ml, first, asl, rng, 0.0);
  EXPECT_EQ(c.mp, 1);
  EXPECT_EQ(c.memory, Condition::exactly(state(2)));
}

TEST(CoverMemory, AllAliasingPicksFewestVotes) {
  MemoryList ml(5);
  ml.update(state(3), state(9));
  ml.update(state(2), state(9));
  ml.update(state(1), state(9));  // ml = [1, 2, 3]
  AliasingStateList asl;
  for (int i = 0; i < 9; ++i) asl.insert(state(1));
  for (int i = 0; i < 4; ++i) asl.insert(state(2));
  for (int i = 0; i < 7; ++i) asl.insert(state(3));
  Rng rng(1);
  auto all = [](const BitString&) { return true; };
  EXPECT_EQ(cover_memory_condition(ml, all, asl, rng, 0.3).mp, 1);

  int picks[3] = {};
  for (int i = 0; i < 6000; ++i)
    ++picks[cover_memory_condition(ml, all, asl, rng, 0.3, MemoryFallback::InverseNumRoulette).mp];
  EXPECT_GT(picks[1], picks[2]);
  EXPECT_GT(picks[2], picks[0]);
}

TEST(CoverMemory, EmptyListIsAnError) {
  MemoryList ml(5);
  AliasingStateList asl;
  Rng rng(1);
  try {
    cover_memory_condition(ml, [](const BitString&) { return false; }, asl, rng, 0.3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyMemoryList);
  }
}
