#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "xcsmd/aliasing_state_list.hpp"
#include "xcsmd/classifier.hpp"
#include "xcsmd/error.hpp"
#include "xcsmd/maze.hpp"
#include "xcsmd/memory_list.hpp"
#include "xcsmd/params.hpp"
#include "xcsmd/population.hpp"
#include "xcsmd/random.hpp"

namespace xcsmd {

// Everything the operators below need about the current time step.
struct StepContext {
  const BitString* sensation = nullptr;
  const MemoryList* memory = nullptr;
  AliasingJudge* judge = nullptr;  // null for plain XCS
  const AliasingStateList* asl = nullptr;
  bool aliased = false;  // current sensation judged aliased
  long long now = 0;

  // Memory-type rules are used only where the state is aliased and there is
  // something to remember.
  bool use_memory() const { return aliased && memory && !memory->empty(); }
};

struct ActionSet {
  std::vector<Handle> members;
  int action = 0;
  BitString sensation;
  bool aliased = false;
  double max_prediction = 0.0;  // max of the prediction array it was chosen from
};

// Fitness-weighted prediction per action. NaN marks an action with no advocate.
struct PredictionArray {
  std::array<double, kActionCount> value{};
  std::array<bool, kActionCount> defined{};

  double max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < kActionCount; ++a)
      if (defined[a]) m = std::max(m, value[a]);
    if (m == -std::numeric_limits<double>::infinity())
      throw Error(Errc::EmptyPredictionArray, "no action is predicted");
    return m;
  }

  int defined_count() const {
    return static_cast<int>(std::count(defined.begin(), defined.end(), true));
  }
};

inline double accuracy(double error, const Params& p) {
  return error < p.epsilon0 ? 1.0 : p.alpha * std::pow(error / p.epsilon0, -p.nu);
}

inline bool classifier_matches(const Classifier& cl, const StepContext& ctx) {
  if (cl.has_memory() != ctx.use_memory()) return false;
  return classifier_matches(cl, *ctx.sensation, *ctx.memory);
}

// New classifier for `action` matching the current situation. The memory part
// is only added when memory-type rules are active in this state.
inline Classifier make_covering(const StepContext& ctx, int action, const Params& p, Rng& rng, bool fully_specific) {
  Classifier cl;
  cl.condition = fully_specific ? Condition::exactly(*ctx.sensation) : Condition::cover(*ctx.sensation, p.p_hash, rng);
  cl.action = action;
  if (ctx.use_memory()) {
    AliasingJudge& judge = *ctx.judge;
    const int mp = select_memory_index(*ctx.memory, judge, *ctx.asl, rng, p.memory_fallback, p.sensation_length());
    const BitString& m = (*ctx.memory)[static_cast<std::size_t>(mp)];
    cl.memory = fully_specific ? Condition::exactly(m) : Condition::cover(m, p.p_hash, rng);
    cl.mp = mp;
  }
  cl.prediction = p.p_init;
  cl.error = p.eps_init;
  cl.fitness = p.f_init;
  cl.timestamp = ctx.now;
  return cl;
}

// Roulette deletion. Rules that are experienced yet much less fit than average
// get a larger vote.
inline void delete_one(Population& pop, const Params& p, Rng& rng) {
  if (pop.empty()) return;
  const double mean = pop.mean_micro_fitness();
  std::vector<Handle> hs;
  std::vector<double> votes;
  pop.for_each([&](Handle h, const Classifier& c) {
    double vote = c.action_set_size * c.numerosity;
    const double micro_f = c.fitness / c.numerosity;
    if (c.experience > p.theta_del && micro_f < p.delta * mean && micro_f > 0.0) vote *= mean / micro_f;
    hs.push_back(h);
    votes.push_back(vote);
  });
  pop.decrement(hs[rng.roulette(votes)]);
}

inline void enforce_capacity(Population& pop, const Params& p, Rng& rng) {
  while (pop.micro_size() > p.population_size) delete_one(pop, p, rng);
}

// Builds [M], covering until at least theta_mna actions are advocated.
inline std::vector<Handle> build_match_set(Population& pop, const StepContext& ctx, const Params& p, Rng& rng) {
  for (;;) {
    std::vector<Handle> m;
    std::array<bool, kActionCount> seen{};
    pop.for_each([&](Handle h, const Classifier& c) {
      if (classifier_matches(c, ctx)) {
        m.push_back(h);
        seen[c.action] = true;
      }
    });
    const int present = static_cast<int>(std::count(seen.begin(), seen.end(), true));
    if (present >= p.theta_mna) return m;
    for (int a = 0; a < kActionCount; ++a)
      if (!seen[a]) pop.insert(make_covering(ctx, a, p, rng, false));
    enforce_capacity(pop, p, rng);
  }
}

inline PredictionArray prediction_array(const Population& pop, const std::vector<Handle>& match_set) {
  PredictionArray pa;
  std::array<double, kActionCount> fsum{};
  for (Handle h : match_set) {
    const Classifier& c = pop[h];
    pa.defined[c.action] = true;
    pa.value[c.action] += c.prediction * c.fitness;
    fsum[c.action] += c.fitness;
  }
  for (int a = 0; a < kActionCount; ++a) {
    if (!pa.defined[a]) pa.value[a] = std::numeric_limits<double>::quiet_NaN();
    else if (fsum[a] > 0.0) pa.value[a] /= fsum[a];
  }
  return pa;
}

// Greedy choice with ties broken by the lowest action number.
inline int best_action(const PredictionArray& pa) {
  int best = -1;
  for (int a = 0; a < kActionCount; ++a)
    if (pa.defined[a] && (best < 0 || pa.value[a] > pa.value[best])) best = a;
  if (best < 0) throw Error(Errc::EmptyPredictionArray, "no action is predicted");
  return best;
}

inline int random_action(const PredictionArray& pa, Rng& rng) {
  std::vector<int> options;
  for (int a = 0; a < kActionCount; ++a)
    if (pa.defined[a]) options.push_back(a);
  if (options.empty()) throw Error(Errc::EmptyPredictionArray, "no action is predicted");
  return options[static_cast<std::size_t>(rng.below(static_cast<int>(options.size())))];
}

inline int select_action(const PredictionArray& pa, bool explore, Rng& rng) {
  return explore ? random_action(pa, rng) : best_action(pa);
}

inline double compute_payoff(double previous_reward, const PredictionArray& now, double gamma) {
  return previous_reward + gamma * now.max();
}

inline ActionSet form_action_set(const Population& pop, const std::vector<Handle>& match_set, int action,
                                 const BitString& s, bool aliased, double max_prediction) {
  ActionSet as{{}, action, s, aliased, max_prediction};
  for (Handle h : match_set)
    if (pop[h].action == action) as.members.push_back(h);
  return as;
}

inline void drop_dead(ActionSet& as, const Population& pop) {
  std::erase_if(as.members, [&](Handle h) { return !pop.alive(h); });
}

inline int action_set_numerosity(const ActionSet& as, const Population& pop) {
  int n = 0;
  for (Handle h : as.members) n += pop[h].numerosity;
  return n;
}

// Fully specific rules never fall below the population mean fitness.
inline void apply_fitness_floor(ActionSet& as, Population& pop) {
  drop_dead(as, pop);
  const double mean = pop.mean_fitness();
  for (Handle h : as.members) {
    Classifier& c = pop[h];
    if (c.fully_specific() && c.fitness < mean) c.fitness = mean;
  }
}

inline void action_set_subsumption(ActionSet& as, Population& pop, const Params& p, Rng& rng) {
  drop_dead(as, pop);
  const SubsumptionParams sp = p.subsumption();
  std::optional<Handle> best;
  int best_defined = 0;
  for (Handle h : as.members) {
    const Classifier& c = pop[h];
    if (!could_subsume(c, sp)) continue;
    const int defined = c.condition.defined_count() + (c.memory ? c.memory->defined_count() : 0);
    if (!best || defined < best_defined || (defined == best_defined && rng.chance(0.5))) {
      best = h;
      best_defined = defined;
    }
  }
  if (!best) return;
  for (Handle h : as.members) {
    if (h == *best || !pop.alive(h)) continue;
    const Classifier& c = pop[h];
    const int defined = c.condition.defined_count() + (c.memory ? c.memory->defined_count() : 0);
    if (defined > best_defined && is_at_least_as_general(pop[*best], c)) {
      const int n = c.numerosity;
      pop.remove(h);
      pop.add_numerosity(*best, n);
    }
  }
  drop_dead(as, pop);
}

// Reinforcement of [A] towards payoff P: prediction, error, set size, then
// fitness from the relative accuracy within the set.
inline void update_action_set(ActionSet& as, double payoff, Population& pop, const Params& p, Rng& rng,
                              bool fitness_floor) {
  drop_dead(as, pop);
  if (as.members.empty()) return;
  const double set_size = action_set_numerosity(as, pop);
  for (Handle h : as.members) {
    Classifier& c = pop[h];
    ++c.experience;
    const double old_p = c.prediction;
    const double rate = c.experience < 1.0 / p.beta ? 1.0 / c.experience : p.beta;
    c.error += rate * (std::abs(payoff - old_p) - c.error);
    c.prediction += rate * (payoff - old_p);
    c.action_set_size += rate * (set_size - c.action_set_size);
  }
  std::vector<double> kappa;
  double total = 0.0;
  for (Handle h : as.members) {
    const Classifier& c = pop[h];
    kappa.push_back(accuracy(c.error, p));
    total += kappa.back() * c.numerosity;
  }
  for (std::size_t i = 0; i < as.members.size(); ++i) {
    Classifier& c = pop[as.members[i]];
    const double rel = kappa[i] * c.numerosity / total;
    c.fitness += p.beta * (rel - c.fitness);
  }
  if (fitness_floor) apply_fitness_floor(as, pop);
  if (p.as_subsumption) action_set_subsumption(as, pop, p, rng);
}

namespace detail {

inline std::string genome(const Classifier& c) {
  return (c.memory ? c.memory->to_string() : std::string()) + c.condition.to_string();
}

inline void set_genome(Classifier& c, const std::string& g) {
  const std::size_t mlen = c.memory ? static_cast<std::size_t>(c.memory->length()) : 0;
  if (c.memory) c.memory = Condition::parse(g.substr(0, mlen));
  c.condition = Condition::parse(g.substr(mlen));
}

inline std::size_t select_parent(const Population& pop, const std::vector<Handle>& pool, Rng& rng) {
  std::vector<double> w;
  for (Handle h : pool) w.push_back(pop[h].fitness);
  return rng.roulette(w);
}

inline void mutate(Classifier& c, const Params& p, Rng& rng) {
  std::string g = genome(c);
  static constexpr char kSymbols[3] = {'0', '1', '#'};
  for (char& ch : g) {
    if (!rng.chance(p.mu)) continue;
    char other[2];
    int k = 0;
    for (char s : kSymbols)
      if (s != ch) other[k++] = s;
    ch = other[rng.below(2)];
  }
  set_genome(c, g);
  if (rng.chance(p.mu)) {
    const int shift = rng.below(kActionCount - 1) + 1;
    c.action = (c.action + shift) % kActionCount;
  }
  if (c.has_memory() && rng.chance(p.mu)) {
    c.mp += rng.chance(0.5) ? 1 : -1;
    c.mp = std::clamp(c.mp, 0, p.memory_size - 1);
  }
}

}  // namespace detail

inline bool ga_due(const ActionSet& as, const Population& pop, long long now, const Params& p) {
  long long num = 0;
  double ts = 0.0;
  for (Handle h : as.members) {
    const Classifier& c = pop[h];
    num += c.numerosity;
    ts += static_cast<double>(c.timestamp) * c.numerosity;
  }
  return num > 0 && static_cast<double>(now) - ts / num > p.theta_ga;
}

// Niche GA on [A]. Both parents come from the same type class (memoryless or
// memory-type) so their genomes line up for crossover.
inline void run_ga(ActionSet& as, Population& pop, long long now, const Params& p, Rng& rng) {
  drop_dead(as, pop);
  if (as.members.empty() || !ga_due(as, pop, now, p)) return;
  for (Handle h : as.members) pop[h].timestamp = now;

  const Handle h1 = as.members[detail::select_parent(pop, as.members, rng)];
  std::vector<Handle> same;
  for (Handle h : as.members)
    if (pop[h].has_memory() == pop[h1].has_memory()) same.push_back(h);
  const Handle h2 = same[detail::select_parent(pop, same, rng)];
  const Classifier parent1 = pop[h1];
  const Classifier parent2 = pop[h2];

  Classifier c1 = parent1, c2 = parent2;
  for (Classifier* c : {&c1, &c2}) {
    c->numerosity = 1;
    c->experience = 0;
    c->timestamp = now;
    c->fb_pos = c->fb_neg = 0.0;
  }
  const double micro_f = (parent1.fitness / parent1.numerosity + parent2.fitness / parent2.numerosity) / 2.0;
  if (rng.chance(p.chi)) {
    std::string g1 = detail::genome(c1), g2 = detail::genome(c2);
    std::size_t x = static_cast<std::size_t>(rng.below(static_cast<int>(g1.size()) + 1));
    std::size_t y = static_cast<std::size_t>(rng.below(static_cast<int>(g1.size()) + 1));
    if (x > y) std::swap(x, y);
    for (std::size_t i = x; i < y; ++i) std::swap(g1[i], g2[i]);
    detail::set_genome(c1, g1);
    detail::set_genome(c2, g2);
    const double pred = (parent1.prediction + parent2.prediction) / 2.0;
    const double err = (parent1.error + parent2.error) / 2.0;
    for (Classifier* c : {&c1, &c2}) {
      c->prediction = pred;
      c->error = err;
    }
  }
  for (Classifier* c : {&c1, &c2}) {
    c->fitness = 0.1 * micro_f;
    detail::mutate(*c, p, rng);
  }

  const SubsumptionParams sp = p.subsumption();
  for (const Classifier& child : {c1, c2}) {
    if (p.ga_subsumption) {
      if (pop.alive(h1) && subsumes(pop[h1], child, sp)) {
        pop.add_numerosity(h1, 1);
        continue;
      }
      if (pop.alive(h2) && subsumes(pop[h2], child, sp)) {
        pop.add_numerosity(h2, 1);
        continue;
      }
    }
    pop.insert(child);
  }
  enforce_capacity(pop, p, rng);
}

}  // namespace xcsmd
