#include "lav/error.hpp"

namespace lav {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::MalformedContainer: return "MalformedContainer";
    case Errc::UnsupportedEncoding: return "UnsupportedEncoding";
    case Errc::EmptyAudio: return "EmptyAudio";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::AudioTooShort: return "AudioTooShort";
    case Errc::BadMagic: return "BadMagic";
    case Errc::BadVersion: return "BadVersion";
    case Errc::BadHeader: return "BadHeader";
    case Errc::TruncatedPayload: return "TruncatedPayload";
    case Errc::InvalidStats: return "InvalidStats";
    case Errc::NonFinite: return "NonFinite";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::TooFewFrames: return "TooFewFrames";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::RateMismatch: return "RateMismatch";
    case Errc::BadChroma: return "BadChroma";
    case Errc::BadLayerCount: return "BadLayerCount";
    case Errc::WindowTooLarge: return "WindowTooLarge";
  }
  return "Unknown";
}

}  // namespace lav
