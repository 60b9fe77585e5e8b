#pragma once

#include <cstddef>
#include <deque>
#include <limits>
#include <vector>

#include "xcsmd/aliasing_state_list.hpp"
#include "xcsmd/classifier.hpp"
#include "xcsmd/error.hpp"
#include "xcsmd/random.hpp"
#include "xcsmd/ternary.hpp"

namespace xcsmd {

// Bounded FIFO of recently left sensations, newest at index 0.
class MemoryList {
 public:
  explicit MemoryList(std::size_t capacity = 5) : capacity_(capacity) {}

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const BitString& operator[](std::size_t i) const { return elems_[i]; }
  bool has(int index) const { return index >= 0 && static_cast<std::size_t>(index) < elems_.size(); }

  void reset() { elems_.clear(); }

  // Records the state the agent has just left. An unchanged sensation means the
  // agent did not move, and the list stays as it is.
  void update(const BitString& previous, const BitString& now) {
    if (previous == now) return;
    push(previous);
  }

  // Same as update() for lists that store `sensation + action` elements:
  // `element` is the sensation being left with its action suffix.
  void update_with(const BitString& element, const BitString& previous, const BitString& now) {
    if (previous == now) return;
    push(element);
  }

  std::vector<BitString> elements() const { return {elems_.begin(), elems_.end()}; }

 private:
  void push(const BitString& s) {
    elems_.push_front(s);
    while (elems_.size() > capacity_) elems_.pop_back();
  }

  std::size_t capacity_;
  std::deque<BitString> elems_;
};

inline bool classifier_matches(const Classifier& cl, const BitString& s, const MemoryList& ml) {
  if (!cl.condition.matches(s)) return false;
  if (!cl.has_memory()) return true;
  return ml.has(cl.mp) && cl.memory->matches(ml[static_cast<std::size_t>(cl.mp)]);
}

enum class MemoryFallback { SmallestNum, InverseNumRoulette };

struct MemoryCover {
  Condition memory;
  int mp = kNoMemory;
};

// Index of the memory element a new memory condition should refer to: the
// first element not judged aliased, or, when all are aliased, the one with the
// fewest aliasing votes.
template <typename Judge>
int select_memory_index(const MemoryList& ml, Judge&& is_aliasing, const AliasingStateList& asl, Rng& rng,
                        MemoryFallback fallback, int sensation_length) {
  if (ml.empty()) throw Error(Errc::EmptyMemoryList, "cannot cover a memory condition from an empty list");
  for (std::size_t i = 0; i < ml.size(); ++i)
    if (!is_aliasing(ml[i])) return static_cast<int>(i);

  std::vector<int> nums;
  for (std::size_t i = 0; i < ml.size(); ++i) nums.push_back(std::max(1, asl.num(ml[i].prefix(sensation_length))));
  if (fallback == MemoryFallback::InverseNumRoulette) {
    std::vector<double> w;
    for (int n : nums) w.push_back(1.0 / n);
    return static_cast<int>(rng.roulette(w));
  }
  int best = 0;
  for (std::size_t i = 1; i < nums.size(); ++i)
    if (nums[i] < nums[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  return best;
}

template <typename Judge>
MemoryCover cover_memory_condition(const MemoryList& ml, Judge&& is_aliasing, const AliasingStateList& asl, Rng& rng,
                                   double p_hash, MemoryFallback fallback = MemoryFallback::SmallestNum,
                                   int sensation_length = 16) {
  const int mp = select_memory_index(ml, is_aliasing, asl, rng, fallback, sensation_length);
  return {Condition::cover(ml[static_cast<std::size_t>(mp)], p_hash, rng), mp};
}

}  // namespace xcsmd
