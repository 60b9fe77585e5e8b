#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "xcsmd/aliasing_state_list.hpp"
#include "xcsmd/error.hpp"
#include "xcsmd/memory_list.hpp"

namespace xcsmd {

enum class SystemMode { Xcsmd, Xcs };

inline const char* to_string(SystemMode m) { return m == SystemMode::Xcsmd ? "xcsmd" : "xcs"; }

// Learning-classifier parameters shared by both system modes.
struct Params {
  SystemMode mode = SystemMode::Xcsmd;
  int population_size = 800;  // N, in microclassifiers

  double alpha = 0.1;
  double beta = 0.2;
  double gamma = 0.71;
  double epsilon0 = 5.0;
  double nu = 5.0;
  int theta_ga = 25;
  double chi = 0.8;
  double mu = 0.01;
  double delta = 0.1;
  int theta_del = 25;
  int theta_sub = 35;
  int theta_mna = 8;
  double p_init = 10.0;
  double f_init = 0.01;
  double eps_init = 0.0;
  double p_explore = 0.5;  // P_s
  double p_hash = 0.3;

  int theta_asr = 30;
  double tau = 0.4;
  int theta_ascover = 20;
  int memory_size = 5;  // N_ml

  double food_reward = 1000.0;

  bool ga_subsumption = true;
  bool as_subsumption = false;
  bool memory_includes_action = false;
  bool ps_per_problem = false;
  bool ga_explore_only = true;
  AliasingDecision aliasing_decision = AliasingDecision::Probabilistic;
  MemoryFallback memory_fallback = MemoryFallback::SmallestNum;

  bool memory_enabled() const { return mode == SystemMode::Xcsmd; }
  int sensation_length() const { return 16; }
  int memory_element_length() const { return memory_includes_action ? 16 + 3 : 16; }
  SubsumptionParams subsumption() const { return {theta_sub, epsilon0}; }
};

struct ExperimentConfig {
  std::string maze = "woods1";
  Params params;
  int learning_problems = 6500;
  int final_exploit_problems = 2500;
  int max_steps = 100;  // M_es
  int detection_until_problem = -1;  // -1: end of the learning phase
  std::uint64_t seed = 1;
  int runs = 10;

  int detection_limit() const { return detection_until_problem < 0 ? learning_problems : detection_until_problem; }

  void validate() const {
    auto unit = [](double v, const char* name) {
      if (!(v >= 0.0 && v <= 1.0)) throw Error(Errc::InvalidConfig, std::string(name) + " must lie in [0,1]");
    };
    const Params& p = params;
    unit(p.beta, "beta");
    unit(p.gamma, "gamma");
    unit(p.chi, "chi");
    unit(p.mu, "mu");
    unit(p.delta, "delta");
    unit(p.p_explore, "p_s");
    unit(p.p_hash, "p_hash");
    if (p.population_size <= 0) throw Error(Errc::InvalidConfig, "n must be positive");
    if (p.memory_size <= 0) throw Error(Errc::InvalidConfig, "n_ml must be positive");
    if (!(p.epsilon0 > 0.0)) throw Error(Errc::InvalidConfig, "epsilon0 must be positive");
    if (p.theta_ga < 0 || p.theta_del < 0 || p.theta_sub < 0 || p.theta_mna < 0 || p.theta_asr < 0 ||
        p.theta_ascover < 0 || p.alpha < 0 || p.nu < 0 || p.tau < 0 || p.p_init < 0 || p.f_init <= 0 ||
        p.eps_init < 0)
      throw Error(Errc::InvalidConfig, "thresholds must be non-negative");
    if (p.theta_mna > 8) throw Error(Errc::InvalidConfig, "theta_mna cannot exceed the 8 actions");
    if (learning_problems < 0 || final_exploit_problems < 0) throw Error(Errc::InvalidConfig, "negative problem count");
    if (max_steps < 1) throw Error(Errc::InvalidConfig, "mes must be at least 1");
    if (runs < 1) throw Error(Errc::InvalidConfig, "runs must be at least 1");
  }
};

// Flat `key = value` view over ExperimentConfig used by config files, CLI
// overrides and run manifests.
class ConfigKeys {
 public:
  struct Entry {
    std::string key;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
  };

  static const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = build();
    return table;
  }

  static void set(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "wall_seconds") return;  // written by run manifests, informational only
    for (const auto& e : entries())
      if (e.key == key) {
        try {
          e.set(cfg, value);
        } catch (const Error&) {
          throw;
        } catch (const std::exception&) {
          throw Error(Errc::InvalidConfig, "bad value '" + value + "' for " + key);
        }
        return;
      }
    throw Error(Errc::InvalidConfig, "unknown key '" + key + "'");
  }

  static std::string echo(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& e : entries()) out += e.key + " = " + e.get(cfg) + "\n";
    return out;
  }

  // Applies `key = value` lines; '#' starts a comment. Returns the keys set.
  static std::vector<std::string> apply_text(ExperimentConfig& cfg, const std::string& text) {
    std::vector<std::string> keys;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw Error(Errc::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
      keys.push_back(trim(line.substr(0, eq)));
      set(cfg, keys.back(), trim(line.substr(eq + 1)));
    }
    return keys;
  }

  static std::vector<std::string> apply_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Errc::Io, "cannot read config " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return apply_text(cfg, ss.str());
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

 private:
  static std::string fmt(double v) {
    std::ostringstream o;
    o.precision(17);
    o << v;
    return o.str();
  }

  static bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw Error(Errc::InvalidConfig, "expected boolean, got '" + v + "'");
  }

  static std::size_t full(const std::string& v, std::size_t used) {
    if (used != v.size()) throw Error(Errc::InvalidConfig, "trailing characters in '" + v + "'");
    return used;
  }

  static double to_double(const std::string& v) {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    full(v, used);
    return d;
  }

  static long long to_int(const std::string& v) {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    full(v, used);
    return i;
  }

  template <typename T>
  static Entry real(std::string key, T ExperimentConfig::*group, double T::*field) {
    return {std::move(key), [=](ExperimentConfig& c, const std::string& v) { (c.*group).*field = to_double(v); },
            [=](const ExperimentConfig& c) { return fmt((c.*group).*field); }};
  }
  template <typename T>
  static Entry integer(std::string key, T ExperimentConfig::*group, int T::*field) {
    return {std::move(key),
            [=](ExperimentConfig& c, const std::string& v) { (c.*group).*field = static_cast<int>(to_int(v)); },
            [=](const ExperimentConfig& c) { return std::to_string((c.*group).*field); }};
  }
  template <typename T>
  static Entry flag(std::string key, T ExperimentConfig::*group, bool T::*field) {
    return {std::move(key), [=](ExperimentConfig& c, const std::string& v) { (c.*group).*field = parse_bool(v); },
            [=](const ExperimentConfig& c) { return std::string((c.*group).*field ? "true" : "false"); }};
  }
  static Entry top_int(std::string key, int ExperimentConfig::*field) {
    return {std::move(key), [=](ExperimentConfig& c, const std::string& v) { c.*field = static_cast<int>(to_int(v)); },
            [=](const ExperimentConfig& c) { return std::to_string(c.*field); }};
  }

  static std::vector<Entry> build() {
    using C = ExperimentConfig;
    auto P = &C::params;
    std::vector<Entry> t;
    t.push_back({"maze", [](C& c, const std::string& v) { c.maze = v; }, [](const C& c) { return c.maze; }});
    t.push_back({"mode",
                 [](C& c, const std::string& v) {
                   if (v == "xcsmd") c.params.mode = SystemMode::Xcsmd;
                   else if (v == "xcs") c.params.mode = SystemMode::Xcs;
                   else throw Error(Errc::InvalidConfig, "mode must be xcsmd or xcs");
                 },
                 [](const C& c) { return std::string(to_string(c.params.mode)); }});
    t.push_back(integer("n", P, &Params::population_size));
    t.push_back(top_int("learning_problems", &C::learning_problems));
    t.push_back(top_int("final_exploit_problems", &C::final_exploit_problems));
    t.push_back(top_int("mes", &C::max_steps));
    t.push_back(top_int("detection_until_problem", &C::detection_until_problem));
    t.push_back(top_int("runs", &C::runs));
    t.push_back({"seed", [](C& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(to_int(v)); },
                 [](const C& c) { return std::to_string(c.seed); }});
    t.push_back(real("alpha", P, &Params::alpha));
    t.push_back(real("beta", P, &Params::beta));
    t.push_back(real("gamma", P, &Params::gamma));
    t.push_back(real("epsilon0", P, &Params::epsilon0));
    t.push_back(real("nu", P, &Params::nu));
    t.push_back(integer("theta_ga", P, &Params::theta_ga));
    t.push_back(real("chi", P, &Params::chi));
    t.push_back(real("mu", P, &Params::mu));
    t.push_back(real("delta", P, &Params::delta));
    t.push_back(integer("theta_del", P, &Params::theta_del));
    t.push_back(integer("theta_sub", P, &Params::theta_sub));
    t.push_back(integer("theta_mna", P, &Params::theta_mna));
    t.push_back(real("p_i", P, &Params::p_init));
    t.push_back(real("f_i", P, &Params::f_init));
    t.push_back(real("epsilon_i", P, &Params::eps_init));
    t.push_back(real("p_s", P, &Params::p_explore));
    t.push_back(real("p_hash", P, &Params::p_hash));
    t.push_back(integer("theta_asr", P, &Params::theta_asr));
    t.push_back(real("tau", P, &Params::tau));
    t.push_back(integer("theta_ascover", P, &Params::theta_ascover));
    t.push_back(integer("n_ml", P, &Params::memory_size));
    t.push_back(real("r_food", P, &Params::food_reward));
    t.push_back(flag("ga_subsumption", P, &Params::ga_subsumption));
    t.push_back(flag("as_subsumption", P, &Params::as_subsumption));
    t.push_back(flag("memory_includes_action", P, &Params::memory_includes_action));
    t.push_back(flag("ps_per_problem", P, &Params::ps_per_problem));
    t.push_back(flag("ga_explore_only", P, &Params::ga_explore_only));
    t.push_back({"aliasing_decision",
                 [](C& c, const std::string& v) {
                   if (v == "probabilistic") c.params.aliasing_decision = AliasingDecision::Probabilistic;
                   else if (v == "deterministic") c.params.aliasing_decision = AliasingDecision::Deterministic;
                   else throw Error(Errc::InvalidConfig, "aliasing_decision must be probabilistic or deterministic");
                 },
                 [](const C& c) {
                   return std::string(c.params.aliasing_decision == AliasingDecision::Probabilistic ? "probabilistic"
                                                                                                   : "deterministic");
                 }});
    t.push_back({"memory_fallback",
                 [](C& c, const std::string& v) {
                   if (v == "smallest") c.params.memory_fallback = MemoryFallback::SmallestNum;
                   else if (v == "roulette") c.params.memory_fallback = MemoryFallback::InverseNumRoulette;
                   else throw Error(Errc::InvalidConfig, "memory_fallback must be smallest or roulette");
                 },
                 [](const C& c) {
                   return std::string(c.params.memory_fallback == MemoryFallback::SmallestNum ? "smallest" : "roulette");
                 }});
    return t;
  }
};

}  // namespace xcsmd
