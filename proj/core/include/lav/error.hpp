#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lav {

enum class Errc {
  InvalidArgument,
  // audio
  MalformedContainer,
  UnsupportedEncoding,
  EmptyAudio,
  LengthMismatch,
  AudioTooShort,
  // binary formats
  BadMagic,
  BadVersion,
  BadHeader,
  TruncatedPayload,
  InvalidStats,
  NonFinite,
  // numerics
  TooFewSamples,
  TooFewFrames,
  DimMismatch,
  RateMismatch,
  BadChroma,
  BadLayerCount,
  WindowTooLarge,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lav
