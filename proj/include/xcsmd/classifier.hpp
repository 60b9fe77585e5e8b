#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xcsmd/error.hpp"
#include "xcsmd/ternary.hpp"

namespace xcsmd {

class MemoryList;

// mp == kNoMemory marks a memoryless classifier.
inline constexpr int kNoMemory = -1;

struct Classifier {
  std::optional<Condition> memory;  // present iff mp >= 0
  Condition condition;
  int action = 0;
  int mp = kNoMemory;

  double prediction = 0.0;
  double error = 0.0;
  double fitness = 0.01;
  int experience = 0;
  long long timestamp = 0;
  double action_set_size = 1.0;
  int numerosity = 1;

  // Critical-error feedback accumulators.
  double fb_pos = 0.0;
  double fb_neg = 0.0;

  bool has_memory() const { return mp >= 0; }

  // Normalised imbalance of accumulated feedback. With no feedback yet the
  // classifier counts as perfectly stable.
  double stable_feedback() const {
    const double total = fb_pos + fb_neg;
    if (!(total > 0.0)) return 1.0;
    return std::abs(fb_pos - fb_neg) / total;
  }

  // Fraction of defined symbols over the normal and (if present) memory
  // condition taken together.
  double specificity() const {
    int defined = condition.defined_count();
    int length = condition.length();
    if (memory) {
      defined += memory->defined_count();
      length += memory->length();
    }
    return length == 0 ? 0.0 : static_cast<double>(defined) / length;
  }

  bool fully_specific() const {
    return condition.defined_count() == condition.length() &&
           (!memory || memory->defined_count() == memory->length());
  }

  // Identity used for macroclassifier merging.
  bool same_rule(const Classifier& o) const {
    return action == o.action && mp == o.mp && condition == o.condition && memory == o.memory;
  }

  bool consistent() const { return (mp == kNoMemory) == !memory.has_value() && mp >= kNoMemory; }
};

inline double specificity(const Classifier& cl) { return cl.specificity(); }

struct SubsumptionParams {
  int theta_sub = 35;
  double epsilon0 = 5.0;
};

inline bool could_subsume(const Classifier& cl, const SubsumptionParams& p) {
  return cl.experience > p.theta_sub && cl.error < p.epsilon0;
}

// General/specific relation restricted to one (type, mp, action) class.
inline bool is_at_least_as_general(const Classifier& general, const Classifier& specific) {
  if (general.action != specific.action || general.mp != specific.mp) return false;
  if (!general.condition.is_at_least_as_general_as(specific.condition)) return false;
  if (general.memory.has_value() != specific.memory.has_value()) return false;
  if (general.memory && !general.memory->is_at_least_as_general_as(*specific.memory)) return false;
  return true;
}

inline bool subsumes(const Classifier& general, const Classifier& specific, const SubsumptionParams& p) {
  return could_subsume(general, p) && is_at_least_as_general(general, specific);
}

// `mp | m | c | a | p | eps | F | exp | num | as_est | v`
inline std::string format_classifier(const Classifier& cl) {
  char buf[256];
  std::snprintf(buf, sizeof buf, " | %s | %d | %.6f | %.6f | %.6f | %d | %d | %.6f | %.6f", cl.condition.to_string().c_str(),
                cl.action, cl.prediction, cl.error, cl.fitness, cl.experience, cl.numerosity, cl.action_set_size,
                cl.stable_feedback());
  return std::to_string(cl.mp) + " | " + (cl.memory ? cl.memory->to_string() : std::string("-")) + buf;
}

inline Classifier parse_classifier(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string f;
  while (std::getline(in, f, '|')) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? std::string() : f.substr(b, e - b + 1));
  }
  if (fields.size() != 11) throw Error(Errc::InvalidConfig, "population line needs 11 fields: " + line);
  Classifier cl;
  cl.mp = std::stoi(fields[0]);
  if (fields[1] != "-") cl.memory = Condition::parse(fields[1]);
  cl.condition = Condition::parse(fields[2]);
  cl.action = std::stoi(fields[3]);
  cl.prediction = std::stod(fields[4]);
  cl.error = std::stod(fields[5]);
  cl.fitness = std::stod(fields[6]);
  cl.experience = std::stoi(fields[7]);
  cl.numerosity = std::stoi(fields[8]);
  cl.action_set_size = std::stod(fields[9]);
  // v is derived; store it as balanced accumulators that reproduce it.
  const double v = std::stod(fields[10]);
  if (v < 1.0) {
    cl.fb_pos = (1.0 + v) / 2.0;
    cl.fb_neg = (1.0 - v) / 2.0;
  }
  if (!cl.consistent()) throw Error(Errc::InvalidConfig, "memory pointer and memory condition disagree: " + line);
  return cl;
}

}  // namespace xcsmd
