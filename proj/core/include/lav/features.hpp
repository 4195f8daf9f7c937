#pragma once

#include <cstddef>

#include "lav/audio.hpp"
#include "lav/matrix.hpp"

namespace lav {

struct FrameSpec {
  std::size_t fft_size = 2048;
  std::size_t hop = 480;

  /// Throws Error{InvalidArgument} unless fft_size is a power of two and 0 < hop <= fft_size.
  void validate() const;
};

/// Magnitude spectrogram; rows are frames, columns are bins 0..fft_size/2.
struct Spectrogram {
  Matrix mags;
  int sample_rate = kCanonicalRate;
  std::size_t fft_size = 2048;
  std::size_t hop = 480;

  double frame_rate() const noexcept { return static_cast<double>(sample_rate) / static_cast<double>(hop); }
  std::size_t frame_count() const noexcept { return mags.rows(); }
  std::size_t bin_count() const noexcept { return mags.cols(); }
};

enum class FeatureKind { Chroma, Onset };

/// Time-aligned feature frames: 12 columns for chroma, 1 for onset strength.
struct FeatureTrack {
  Matrix frames;
  double rate = 0.0;
  FeatureKind kind = FeatureKind::Onset;

  std::size_t frame_count() const noexcept { return frames.rows(); }
};

inline constexpr std::size_t kPitchClasses = 12;
inline constexpr std::size_t kHpssKernel = 17;

/// Periodic Hann window of length n.
std::vector<double> hann_window(std::size_t n);

/// Centered STFT magnitudes with reflect padding of fft_size/2 on both sides.
/// Frame t is centered on sample t*hop and floor(len/hop) frames are produced.
/// Throws Error{AudioTooShort} when the audio is shorter than fft_size.
Spectrogram stft_magnitude(const AudioBuffer& buf, const FrameSpec& spec = {});

/// Median-filter HPSS: soft percussive mask P^2 / (H^2 + P^2 + 1e-10) applied to
/// the input magnitudes. Medians shrink at the matrix edges.
Spectrogram hpss_percussive(const Spectrogram& spec);

/// Positive log-magnitude spectral flux, scaled into [0, 1] by its clip maximum.
FeatureTrack onset_envelope(const Spectrogram& perc);

/// Energy chroma from bins between 55 Hz and 8 kHz; rows are L1-normalized,
/// near-silent rows (energy < 1e-8) are zero.
FeatureTrack chroma(const Spectrogram& spec);

/// Median of a (possibly even-length) sequence; the even case averages the two
/// middle order statistics. The input is reordered.
double median_inplace(std::span<double> values);

}  // namespace lav
