#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lav {

/// Rate every feature and embedding stage works at (mono).
inline constexpr int kCanonicalRate = 24000;

/// PCM samples in [-1, 1]. Multi-channel data stays interleaved until to_mono().
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = kCanonicalRate;
  int channels = 1;

  std::size_t frame_count() const noexcept {
    return channels > 0 ? samples.size() / static_cast<std::size_t>(channels) : 0;
  }
  double duration_s() const noexcept {
    return static_cast<double>(frame_count()) / static_cast<double>(sample_rate);
  }
};

enum class WavEncoding { Pcm16, Float32 };

/// Parses a RIFF/WAVE container holding 16-bit PCM or 32-bit float, 1 or 2 channels.
/// Throws Error{MalformedContainer | UnsupportedEncoding | EmptyAudio}.
AudioBuffer decode_wav(std::span<const std::uint8_t> bytes);

/// Writes a canonical 44-byte-header WAV. Samples are clipped to [-1, 1];
/// Pcm16 quantizes with round(x * 32768) saturated to the int16 range.
std::vector<std::uint8_t> encode_wav(const AudioBuffer& buf, WavEncoding encoding = WavEncoding::Pcm16);

/// Averages interleaved channels. Throws Error{LengthMismatch} when the sample
/// count is not a multiple of `channels`.
AudioBuffer to_mono(const AudioBuffer& buf, int channels);
inline AudioBuffer to_mono(const AudioBuffer& buf) { return to_mono(buf, buf.channels); }

/// Band-limited rational resampling of mono audio with a polyphase Kaiser-windowed
/// sinc (beta 8.6, 64 zero crossings per side). Output length is
/// round(len * target_rate / sample_rate).
AudioBuffer resample(const AudioBuffer& buf, int target_rate);

/// decode -> mono -> resample to kCanonicalRate.
AudioBuffer load_canonical(std::span<const std::uint8_t> wav_bytes);

}  // namespace lav
