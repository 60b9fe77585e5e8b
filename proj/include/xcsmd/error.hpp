#pragma once

#include <stdexcept>
#include <string>

namespace xcsmd {

enum class Errc {
  RaggedGrid,
  UnknownCell,
  NoFood,
  NoEmpty,
  PosNotEmpty,
  Unreachable,
  LengthMismatch,
  EmptyMemoryList,
  EmptyPredictionArray,
  EmptyList,
  InvalidConfig,
  Io,
};

inline const char* to_string(Errc e) {
  switch (e) {
    case Errc::RaggedGrid: return "RaggedGrid";
    case Errc::UnknownCell: return "UnknownCell";
    case Errc::NoFood: return "NoFood";
    case Errc::NoEmpty: return "NoEmpty";
    case Errc::PosNotEmpty: return "PosNotEmpty";
    case Errc::Unreachable: return "Unreachable";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyMemoryList: return "EmptyMemoryList";
    case Errc::EmptyPredictionArray: return "EmptyPredictionArray";
    case Errc::EmptyList: return "EmptyList";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace xcsmd
