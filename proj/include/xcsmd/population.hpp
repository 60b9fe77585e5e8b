#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "xcsmd/classifier.hpp"

namespace xcsmd {

// Stable reference to a macroclassifier. A handle goes stale once the
// classifier it names is removed; the slot may be reused under a new
// generation.
struct Handle {
  std::uint32_t slot = 0;
  std::uint32_t gen = 0;
  friend bool operator==(const Handle&, const Handle&) = default;
};

struct RuleKey {
  std::uint32_t c_care, c_value, m_care, m_value;
  int action, mp, m_length;
  friend bool operator==(const RuleKey&, const RuleKey&) = default;
};

struct RuleKeyHash {
  std::size_t operator()(const RuleKey& k) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) { h = (h ^ v) * 1099511628211ull; };
    mix(k.c_care);
    mix(k.c_value);
    mix(k.m_care);
    mix(k.m_value);
    mix(static_cast<std::uint64_t>(k.action + 16));
    mix(static_cast<std::uint64_t>(k.mp + 16));
    mix(static_cast<std::uint64_t>(k.m_length));
    return static_cast<std::size_t>(h);
  }
};

inline RuleKey rule_key(const Classifier& cl) {
  RuleKey k{cl.condition.care(), cl.condition.value(), 0, 0, cl.action, cl.mp, -1};
  if (cl.memory) {
    k.m_care = cl.memory->care();
    k.m_value = cl.memory->value();
    k.m_length = cl.memory->length();
  }
  return k;
}

// Macroclassifier population. Iteration order is slot order, which depends only
// on the sequence of operations, so runs replay exactly from a seed.
class Population {
 public:
  // Adds `cl`, or adds its numerosity to an identical rule already present.
  Handle insert(const Classifier& cl) {
    const RuleKey key = rule_key(cl);
    if (auto it = index_.find(key); it != index_.end()) {
      slots_[it->second].numerosity += cl.numerosity;
      micro_ += cl.numerosity;
      return {it->second, gens_[it->second]};
    }
    std::uint32_t slot;
    if (!free_.empty()) {
      slot = free_.back();
      free_.pop_back();
      slots_[slot] = cl;
      live_[slot] = true;
    } else {
      slot = static_cast<std::uint32_t>(slots_.size());
      slots_.push_back(cl);
      gens_.push_back(0);
      live_.push_back(true);
    }
    index_.emplace(key, slot);
    micro_ += cl.numerosity;
    ++macro_;
    return {slot, gens_[slot]};
  }

  std::optional<Handle> find(const Classifier& cl) const {
    auto it = index_.find(rule_key(cl));
    if (it == index_.end()) return std::nullopt;
    return Handle{it->second, gens_[it->second]};
  }

  bool alive(Handle h) const { return h.slot < slots_.size() && live_[h.slot] && gens_[h.slot] == h.gen; }

  Classifier& operator[](Handle h) { return slots_[h.slot]; }
  const Classifier& operator[](Handle h) const { return slots_[h.slot]; }

  void remove(Handle h) {
    if (!alive(h)) return;
    micro_ -= slots_[h.slot].numerosity;
    --macro_;
    index_.erase(rule_key(slots_[h.slot]));
    live_[h.slot] = false;
    ++gens_[h.slot];
    free_.push_back(h.slot);
  }

  // Removes one microclassifier; the macroclassifier goes when none are left.
  void decrement(Handle h) {
    if (!alive(h)) return;
    if (slots_[h.slot].numerosity > 1) {
      --slots_[h.slot].numerosity;
      --micro_;
    } else {
      remove(h);
    }
  }

  void add_numerosity(Handle h, int n) {
    slots_[h.slot].numerosity += n;
    micro_ += n;
  }

  int micro_size() const { return micro_; }
  int macro_size() const { return macro_; }
  bool empty() const { return macro_ == 0; }

  template <typename F>
  void for_each(F&& f) {
    for (std::uint32_t i = 0; i < slots_.size(); ++i)
      if (live_[i]) f(Handle{i, gens_[i]}, slots_[i]);
  }
  template <typename F>
  void for_each(F&& f) const {
    for (std::uint32_t i = 0; i < slots_.size(); ++i)
      if (live_[i]) f(Handle{i, gens_[i]}, slots_[i]);
  }

  std::vector<Handle> handles() const {
    std::vector<Handle> out;
    for_each([&](Handle h, const Classifier&) { out.push_back(h); });
    return out;
  }

  std::vector<Classifier> classifiers() const {
    std::vector<Classifier> out;
    for_each([&](Handle, const Classifier& c) { out.push_back(c); });
    return out;
  }

  // Sum of fitness over sum of numerosity.
  double mean_micro_fitness() const {
    double f = 0.0;
    for_each([&](Handle, const Classifier& c) { f += c.fitness; });
    return micro_ > 0 ? f / micro_ : 0.0;
  }

  // Numerosity-weighted mean of macroclassifier fitness.
  double mean_fitness() const {
    double f = 0.0;
    for_each([&](Handle, const Classifier& c) { f += c.fitness * c.numerosity; });
    return micro_ > 0 ? f / micro_ : 0.0;
  }

  void clear() {
    slots_.clear();
    gens_.clear();
    live_.clear();
    free_.clear();
    index_.clear();
    micro_ = macro_ = 0;
  }

 private:
  std::vector<Classifier> slots_;
  std::vector<std::uint32_t> gens_;
  std::vector<bool> live_;
  std::vector<std::uint32_t> free_;
  std::unordered_map<RuleKey, std::uint32_t, RuleKeyHash> index_;
  int micro_ = 0;
  int macro_ = 0;
};

}  // namespace xcsmd
