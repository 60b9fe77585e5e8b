#pragma once

#include "xcsmd/aliasing_state_list.hpp"
#include "xcsmd/population.hpp"
#include "xcsmd/xcs.hpp"

namespace xcsmd {

// Temporal-difference surprise of the previous step: what the system now
// believes the previous move was worth, minus what it predicted then.
// `max_pa_now` is 0 on the terminal step.
inline double critical_error(double previous_reward, double max_pa_now, double max_pa_previous, double gamma) {
  return previous_reward + gamma * max_pa_now - max_pa_previous;
}

// Accumulates the sign-split critical error on the fully specific members of
// [A]. Only those can reliably attribute it to a single state.
inline void update_feedback(ActionSet& as, double delta, Population& pop) {
  drop_dead(as, pop);
  for (Handle h : as.members) {
    Classifier& c = pop[h];
    if (!c.fully_specific()) continue;
    if (delta > 0.0) c.fb_pos += delta;
    else c.fb_neg += -delta;
  }
}

inline bool satisfies_asr_rule(const Classifier& c, const Params& p) {
  return c.fully_specific() && c.experience > p.theta_asr && c.stable_feedback() < p.tau;
}

// Finds aliasing-state recognisers in [A], votes their states into the list and
// removes them from the population. Returns how many were recognised.
inline int detect_asr(ActionSet& as, AliasingStateList& asl, Population& pop, const Params& p) {
  drop_dead(as, pop);
  int found = 0;
  for (Handle h : as.members) {
    if (!pop.alive(h)) continue;
    const Classifier& c = pop[h];
    if (!satisfies_asr_rule(c, p)) continue;
    const BitString state = c.condition.as_bits();
    if (!c.has_memory()) {
      asl.insert(state);
    } else if (asl.contains(state)) {
      asl.insert(c.memory->as_bits().prefix(p.sensation_length()));
    } else {
      continue;
    }
    ++found;
    pop.remove(h);
  }
  drop_dead(as, pop);
  return found;
}

// Makes sure every visited situation keeps a fully specific candidate around
// until some member of [A] is accurate and experienced.
inline bool action_set_covering(ActionSet& as, const StepContext& ctx, Population& pop, const Params& p, Rng& rng) {
  drop_dead(as, pop);
  for (Handle h : as.members) {
    const Classifier& c = pop[h];
    if (accuracy(c.error, p) == 1.0 && c.experience > p.theta_ascover) return false;
  }
  Classifier cl = make_covering(ctx, as.action, p, rng, true);
  if (auto existing = pop.find(cl)) {
    // Already present: keep it in the set, do not inflate its numerosity.
    if (std::find(as.members.begin(), as.members.end(), *existing) == as.members.end())
      as.members.push_back(*existing);
    return false;
  }
  const Handle h = pop.insert(cl);
  as.members.push_back(h);
  enforce_capacity(pop, p, rng);
  drop_dead(as, pop);
  return true;
}

}  // namespace xcsmd
