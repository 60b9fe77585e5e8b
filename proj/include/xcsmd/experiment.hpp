#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "xcsmd/aliasing_detector.hpp"
#include "xcsmd/aliasing_state_list.hpp"
#include "xcsmd/maze.hpp"
#include "xcsmd/memory_list.hpp"
#include "xcsmd/params.hpp"
#include "xcsmd/population.hpp"
#include "xcsmd/random.hpp"
#include "xcsmd/xcs.hpp"

namespace xcsmd {

struct ProblemOptions {
  bool explore = true;  // random action per step with probability P_s
  bool learn = true;    // reinforcement updates
  bool ga = true;
  bool detect = true;   // aliasing detector hooks (XCSMD only)
};

// One learning agent: population, aliasing list and PRNG stream.
class Agent {
 public:
  Agent(const Params& p, std::uint64_t seed) : p_(p), rng_(seed), ml_(static_cast<std::size_t>(p.memory_size)) {}

  // Runs one problem from a random empty cell; returns steps taken.
  int run_problem(const Maze& maze, const ProblemOptions& opt, int max_steps) {
    return run_problem_from(maze, random_empty_cell(maze, rng_), opt, max_steps);
  }

  int run_problem_from(const Maze& maze, Cell start, const ProblemOptions& opt, int max_steps) {
    const bool memory_on = p_.memory_enabled();
    const bool detect = memory_on && opt.detect && opt.learn;
    AliasingJudge judge(asl_, rng_, p_.aliasing_decision, p_.sensation_length());
    ml_.reset();
    Cell pos = start;
    const bool problem_random = opt.explore && p_.ps_per_problem && rng_.chance(p_.p_explore);

    std::optional<ActionSet> previous;
    double previous_reward = 0.0;
    for (int steps = 1;; ++steps) {
      judge.new_step();
      const BitString s = sense(maze, pos);
      const bool aliased = memory_on && judge(s);
      StepContext ctx{&s, &ml_, memory_on ? &judge : nullptr, &asl_, aliased, time_};

      const std::vector<Handle> match = build_match_set(pop_, ctx, p_, rng_);
      const PredictionArray pa = prediction_array(pop_, match);
      bool random_step = false;
      if (opt.explore) random_step = p_.ps_per_problem ? problem_random : rng_.chance(p_.p_explore);
      const int action = select_action(pa, random_step, rng_);
      const double max_now = pa.max();
      ActionSet as = form_action_set(pop_, match, action, s, aliased, max_now);
      if (detect) action_set_covering(as, ctx, pop_, p_, rng_);

      const StepResult r = step(maze, pos, action, p_.food_reward);

      if (previous && opt.learn) {
        if (detect) update_feedback(*previous, critical_error(previous_reward, max_now, previous->max_prediction, p_.gamma), pop_);
        update_action_set(*previous, compute_payoff(previous_reward, pa, p_.gamma), pop_, p_, rng_, detect);
        if (detect) detect_asr(*previous, asl_, pop_, p_);
        if (opt.ga) run_ga(*previous, pop_, time_, p_, rng_);
      }

      if (r.at_food) {
        if (opt.learn) {
          if (detect) update_feedback(as, critical_error(r.reward, 0.0, max_now, p_.gamma), pop_);
          update_action_set(as, r.reward, pop_, p_, rng_, detect);
          if (detect) detect_asr(as, asl_, pop_, p_);
          if (opt.ga) run_ga(as, pop_, time_, p_, rng_);
        }
        ++time_;
        return steps;
      }

      const BitString next = sense(maze, r.pos);
      if (p_.memory_includes_action)
        ml_.update_with(s.append(static_cast<std::uint32_t>(action), kActionBits), s, next);
      else
        ml_.update(s, next);
      previous = std::move(as);
      previous_reward = r.reward;
      pos = r.pos;
      ++time_;
      if (steps >= max_steps) return steps;
    }
  }

  const Params& params() const { return p_; }
  Population& population() { return pop_; }
  const Population& population() const { return pop_; }
  AliasingStateList& asl() { return asl_; }
  const AliasingStateList& asl() const { return asl_; }
  Rng& rng() { return rng_; }
  const MemoryList& memory() const { return ml_; }
  long long time() const { return time_; }

 private:
  Params p_;
  Rng rng_;
  Population pop_;
  AliasingStateList asl_;
  MemoryList ml_;
  long long time_ = 0;
};

struct ExploitRecord {
  int index = 0;  // 1-based exploit-problem number
  int steps = 0;
  double moving_avg = 0.0;
};

struct PerfSeries {
  std::vector<ExploitRecord> records;
  double final_mean = 0.0;
  int total_problems = 0;
  std::vector<std::pair<BitString, int>> asl;
  std::vector<Classifier> population;
  double seconds = 0.0;
};

inline PerfSeries run_experiment(const ExperimentConfig& cfg, const Maze& maze, std::uint64_t seed) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  Agent agent(cfg.params, seed);
  PerfSeries out;
  std::vector<int> window;
  double window_sum = 0.0;
  double final_sum = 0.0;

  auto record = [&](int steps) {
    window.push_back(steps);
    window_sum += steps;
    if (window.size() > 50) window_sum -= window[window.size() - 51];
    const std::size_t k = std::min<std::size_t>(window.size(), 50);
    out.records.push_back({static_cast<int>(window.size()), steps, window_sum / static_cast<double>(k)});
  };

  const int detect_until = cfg.detection_limit();
  for (int i = 0; i < cfg.learning_problems; ++i) {
    const bool explore = i % 2 == 0;
    ProblemOptions opt;
    opt.explore = explore;
    opt.ga = explore || !cfg.params.ga_explore_only;
    opt.detect = i < detect_until;
    const int steps = agent.run_problem(maze, opt, cfg.max_steps);
    if (!explore) record(steps);
  }
  for (int i = 0; i < cfg.final_exploit_problems; ++i) {
    ProblemOptions opt;
    opt.explore = false;
    opt.ga = false;
    opt.detect = cfg.learning_problems + i < detect_until;
    const int steps = agent.run_problem(maze, opt, cfg.max_steps);
    record(steps);
    final_sum += steps;
  }
  out.total_problems = cfg.learning_problems + cfg.final_exploit_problems;
  out.final_mean = cfg.final_exploit_problems > 0 ? final_sum / cfg.final_exploit_problems : 0.0;
  out.asl = agent.asl().sorted();
  out.population = agent.population().classifiers();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// Runs `cfg.runs` experiments, run r seeded with cfg.seed + r, on up to `jobs`
// threads. Results come back in run order whatever the scheduling.
inline std::vector<PerfSeries> run_seeds(const ExperimentConfig& cfg, const Maze& maze, int jobs) {
  std::vector<PerfSeries> out(static_cast<std::size_t>(cfg.runs));
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (int r; (r = next++) < cfg.runs;) {
      try {
        out[static_cast<std::size_t>(r)] = run_experiment(cfg, maze, cfg.seed + static_cast<std::uint64_t>(r));
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min(jobs, cfg.runs));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr r;
  if (xs.empty()) return r;
  for (double x : xs) r.mean += x;
  r.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.stderr_ = std::sqrt(ss / static_cast<double>(xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
  }
  return r;
}

struct Aggregate {
  std::vector<MeanStderr> curve;  // per exploit problem, over the moving averages
  MeanStderr final_mean;
  std::map<BitString, MeanStderr> asl;  // states never listed in a run count as 0 there
};

inline Aggregate aggregate_runs(const std::vector<PerfSeries>& runs) {
  Aggregate a;
  if (runs.empty()) return a;
  std::size_t len = runs.front().records.size();
  for (const auto& r : runs) len = std::min(len, r.records.size());
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<double> xs;
    for (const auto& r : runs) xs.push_back(r.records[i].moving_avg);
    a.curve.push_back(mean_stderr(xs));
  }
  std::vector<double> finals;
  for (const auto& r : runs) finals.push_back(r.final_mean);
  a.final_mean = mean_stderr(finals);

  std::map<BitString, std::vector<double>> nums;
  for (const auto& r : runs)
    for (const auto& [s, n] : r.asl) nums[s];
  for (auto& [s, v] : nums)
    for (const auto& r : runs) {
      double n = 0;
      for (const auto& [t, k] : r.asl)
        if (t == s) n = k;
      v.push_back(n);
    }
  for (const auto& [s, v] : nums) a.asl[s] = mean_stderr(v);
  return a;
}

inline std::string fmt_num(double v, int precision = 6) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(precision);
  o << v;
  return o.str();
}

inline std::string curve_csv(const PerfSeries& s) {
  std::string out = "exploit_problem_index,raw_steps,moving_avg_50\n";
  for (const auto& r : s.records)
    out += std::to_string(r.index) + "," + std::to_string(r.steps) + "," + fmt_num(r.moving_avg) + "\n";
  return out;
}

inline std::string aggregated_curve_csv(const Aggregate& a) {
  std::string out = "exploit_problem_index,mean,stderr\n";
  for (std::size_t i = 0; i < a.curve.size(); ++i)
    out += std::to_string(i + 1) + "," + fmt_num(a.curve[i].mean) + "," + fmt_num(a.curve[i].stderr_) + "\n";
  return out;
}

inline std::string asl_csv(const std::vector<PerfSeries>& runs) {
  std::string out = "sensation,num,run\n";
  for (std::size_t r = 0; r < runs.size(); ++r)
    for (const auto& [s, n] : runs[r].asl) out += s.to_string() + "," + std::to_string(n) + "," + std::to_string(r) + "\n";
  return out;
}

inline std::string aggregated_asl_csv(const Aggregate& a) {
  std::string out = "sensation,mean_num,stderr\n";
  for (const auto& [s, m] : a.asl) out += s.to_string() + "," + fmt_num(m.mean) + "," + fmt_num(m.stderr_) + "\n";
  return out;
}

inline std::string population_dump(const std::vector<Classifier>& pop) {
  std::string out = "# mp | m | c | a | p | eps | F | exp | num | as | v\n";
  for (const auto& c : pop) out += format_classifier(c) + "\n";
  return out;
}

inline std::string manifest(const ExperimentConfig& cfg, double wall_seconds) {
  return ConfigKeys::echo(cfg) + "wall_seconds = " + fmt_num(wall_seconds, 3) + "\n";
}

}  // namespace xcsmd
