#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "xcsmd/error.hpp"
#include "xcsmd/random.hpp"

namespace xcsmd {

// Fixed-length binary string of at most 32 symbols. Symbol i (counting from the
// left of the printed form) is stored in bit i.
class BitString {
 public:
  static constexpr int kMaxLength = 32;

  BitString() = default;
  BitString(int length, std::uint32_t bits) : length_(length), bits_(bits & mask_for(length)) {}

  static BitString parse(std::string_view text) {
    if (text.size() > kMaxLength) throw Error(Errc::LengthMismatch, "bit string too long");
    std::uint32_t bits = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '1') bits |= 1u << i;
      else if (text[i] != '0') throw Error(Errc::LengthMismatch, "bit string symbol '" + std::string(1, text[i]) + "'");
    }
    return BitString(static_cast<int>(text.size()), bits);
  }

  int length() const { return length_; }
  std::uint32_t bits() const { return bits_; }
  bool bit(int i) const { return (bits_ >> i) & 1u; }

  // Appends the low `width` bits of `value`, most significant first.
  BitString append(std::uint32_t value, int width) const {
    std::uint32_t b = bits_;
    for (int k = 0; k < width; ++k)
      if ((value >> (width - 1 - k)) & 1u) b |= 1u << (length_ + k);
    return BitString(length_ + width, b);
  }

  BitString prefix(int n) const { return n >= length_ ? *this : BitString(n, bits_); }

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(length_), '0');
    for (int i = 0; i < length_; ++i)
      if (bit(i)) s[static_cast<std::size_t>(i)] = '1';
    return s;
  }

  static constexpr std::uint32_t mask_for(int length) {
    return length >= 32 ? 0xFFFFFFFFu : ((1u << length) - 1u);
  }

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString&, const BitString&) = default;

 private:
  int length_ = 0;
  std::uint32_t bits_ = 0;
};

// Ternary condition over {0, 1, #}. `care` marks the defined positions and
// `value` holds their required bits (always a subset of care).
class Condition {
 public:
  Condition() = default;
  Condition(int length, std::uint32_t care, std::uint32_t value)
      : length_(length),
        care_(care & BitString::mask_for(length)),
        value_(value & care & BitString::mask_for(length)) {}

  static Condition parse(std::string_view text) {
    if (text.size() > BitString::kMaxLength) throw Error(Errc::LengthMismatch, "condition too long");
    std::uint32_t care = 0, value = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      switch (text[i]) {
        case '0': care |= 1u << i; break;
        case '1': care |= 1u << i; value |= 1u << i; break;
        case '#': break;
        default: throw Error(Errc::LengthMismatch, "condition symbol '" + std::string(1, text[i]) + "'");
      }
    }
    return Condition(static_cast<int>(text.size()), care, value);
  }

  static Condition exactly(const BitString& s) {
    return Condition(s.length(), BitString::mask_for(s.length()), s.bits());
  }

  static Condition general(int length) { return Condition(length, 0, 0); }

  // Covers `s`, turning each symbol into # independently with probability p_hash.
  static Condition cover(const BitString& s, double p_hash, Rng& rng) {
    std::uint32_t care = 0;
    for (int i = 0; i < s.length(); ++i)
      if (!rng.chance(p_hash)) care |= 1u << i;
    return Condition(s.length(), care, s.bits());
  }

  int length() const { return length_; }
  std::uint32_t care() const { return care_; }
  std::uint32_t value() const { return value_; }

  char symbol(int i) const {
    if (!((care_ >> i) & 1u)) return '#';
    return ((value_ >> i) & 1u) ? '1' : '0';
  }

  Condition with_symbol(int i, char sym) const {
    std::uint32_t care = care_, value = value_;
    const std::uint32_t b = 1u << i;
    care &= ~b;
    value &= ~b;
    if (sym == '0') care |= b;
    else if (sym == '1') { care |= b; value |= b; }
    return Condition(length_, care, value);
  }

  int defined_count() const { return std::popcount(care_); }

  bool matches(const BitString& s) const {
    if (s.length() != length_)
      throw Error(Errc::LengthMismatch,
                  "condition length " + std::to_string(length_) + " vs input " + std::to_string(s.length()));
    return (s.bits() & care_) == value_;
  }

  // True iff every input matched by `other` is also matched by this condition.
  bool is_at_least_as_general_as(const Condition& other) const {
    return length_ == other.length_ && (care_ & ~other.care_) == 0 && (other.value_ & care_) == value_;
  }

  // The fully specific input when no # is present.
  BitString as_bits() const { return BitString(length_, value_); }

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(length_), '#');
    for (int i = 0; i < length_; ++i) s[static_cast<std::size_t>(i)] = symbol(i);
    return s;
  }

  friend bool operator==(const Condition&, const Condition&) = default;

 private:
  int length_ = 0;
  std::uint32_t care_ = 0;
  std::uint32_t value_ = 0;
};

// Free-function form of condition matching.
inline bool matches(const Condition& cond, const BitString& s) { return cond.matches(s); }

}  // namespace xcsmd

template <>
struct std::hash<xcsmd::BitString> {
  std::size_t operator()(const xcsmd::BitString& s) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(s.length()) << 32) | s.bits());
  }
};
