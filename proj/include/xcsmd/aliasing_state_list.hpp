#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "xcsmd/error.hpp"
#include "xcsmd/random.hpp"
#include "xcsmd/ternary.hpp"

namespace xcsmd {

enum class AliasingDecision { Probabilistic, Deterministic };

// States recognised as aliased, each with a vote count.
class AliasingStateList {
 public:
  void insert(const BitString& state) { ++entries_[state]; }

  int num(const BitString& state) const {
    auto it = entries_.find(state);
    return it == entries_.end() ? 0 : it->second;
  }

  bool contains(const BitString& state) const { return entries_.count(state) != 0; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  void clear() { entries_.clear(); }

  // Midpoint between the largest and smallest vote.
  double num_half() const {
    if (entries_.empty()) throw Error(Errc::EmptyList, "aliasing state list is empty");
    auto [lo, hi] = std::minmax_element(entries_.begin(), entries_.end(),
                                        [](const auto& a, const auto& b) { return a.second < b.second; });
    return (hi->second + lo->second) / 2.0;
  }

  // Probability that `state` is treated as aliased.
  double probability(const BitString& state) const {
    const int n = num(state);
    if (n == 0) return 0.0;
    const double half = num_half();
    return n >= half ? 1.0 : n / half;
  }

  bool is_aliasing(const BitString& state, Rng& rng, AliasingDecision mode = AliasingDecision::Probabilistic) const {
    const int n = num(state);
    if (n == 0) return false;
    if (mode == AliasingDecision::Deterministic) return n > num_half();
    return rng.uniform() < probability(state);
  }

  // Entries sorted by vote, largest first; ties keep map order.
  std::vector<std::pair<BitString, int>> sorted() const {
    std::vector<std::pair<BitString, int>> out(entries_.begin(), entries_.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
  }

  // One `sensation num` line per entry.
  std::string dump() const {
    std::string out;
    for (const auto& [s, n] : sorted()) out += s.to_string() + " " + std::to_string(n) + "\n";
    return out;
  }

  const std::map<BitString, int>& entries() const { return entries_; }

 private:
  std::map<BitString, int> entries_;
};

// Aliasing verdicts for one time step. Each state is judged at most once per
// step, so matching, covering and action-set covering agree with each other.
// Memory elements that carry an action suffix are judged by their sensation.
class AliasingJudge {
 public:
  AliasingJudge(const AliasingStateList& asl, Rng& rng, AliasingDecision mode, int sensation_length)
      : asl_(&asl), rng_(&rng), mode_(mode), sensation_length_(sensation_length) {}

  bool operator()(const BitString& state) {
    const BitString key = state.prefix(sensation_length_);
    for (const auto& [s, v] : cache_)
      if (s == key) return v;
    const bool v = asl_->is_aliasing(key, *rng_, mode_);
    cache_.emplace_back(key, v);
    return v;
  }

  void new_step() { cache_.clear(); }

 private:
  const AliasingStateList* asl_;
  Rng* rng_;
  AliasingDecision mode_;
  int sensation_length_;
  std::vector<std::pair<BitString, bool>> cache_;
};

}  // namespace xcsmd
