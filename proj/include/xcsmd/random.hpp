#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace xcsmd {

// Seeded PRNG with fully specified output. std::mt19937_64 is bit-exact across
// standard libraries; the std:: distributions are not, so draws are mapped by
// hand here.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be > 0. Rejection sampling keeps the
  // result unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  int below(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

  bool chance(double p) { return uniform() < p; }

  // Index drawn proportionally to non-negative weights. Falls back to a uniform
  // draw when every weight is zero.
  std::size_t roulette(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) return static_cast<std::size_t>(below(static_cast<std::uint64_t>(weights.size())));
    const double pick = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (pick < acc) return i;
    }
    // Floating point slack: last positive weight.
    for (std::size_t i = weights.size(); i-- > 0;)
      if (weights[i] > 0.0) return i;
    return weights.size() - 1;
  }

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace xcsmd
