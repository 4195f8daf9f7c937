#include "lav/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "lav/error.hpp"

namespace lav {

void FrameSpec::validate() const {
  if (fft_size == 0 || !std::has_single_bit(fft_size))
    throw Error(Errc::InvalidArgument, "fft_size must be a power of two");
  if (hop == 0 || hop > fft_size) throw Error(Errc::InvalidArgument, "hop must be in (0, fft_size]");
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

double median_inplace(std::span<double> values) {
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

Spectrogram stft_magnitude(const AudioBuffer& buf, const FrameSpec& spec) {
  spec.validate();
  if (buf.channels != 1) throw Error(Errc::InvalidArgument, "stft_magnitude expects mono audio");
  const std::size_t len = buf.samples.size();
  if (len < spec.fft_size)
    throw Error(Errc::AudioTooShort, std::to_string(len) + " samples, need at least " +
                                         std::to_string(spec.fft_size));

  const auto pad = static_cast<long long>(spec.fft_size / 2);
  const auto last = static_cast<long long>(len) - 1;
  auto reflect = [&](long long i) {
    if (i < 0) return -i;
    if (i > last) return 2 * last - i;
    return i;
  };

  const std::size_t frames = len / spec.hop;
  const std::size_t bins = spec.fft_size / 2 + 1;
  const auto window = hann_window(spec.fft_size);
  detail::RealFft fft(spec.fft_size);

  Spectrogram out;
  out.mags = Matrix(frames, bins);
  out.sample_rate = buf.sample_rate;
  out.fft_size = spec.fft_size;
  out.hop = spec.hop;
  for (std::size_t t = 0; t < frames; ++t) {
    auto input = fft.input();
    const long long start = static_cast<long long>(t * spec.hop) - pad;
    for (std::size_t n = 0; n < spec.fft_size; ++n)
      input[n] = window[n] * buf.samples[static_cast<std::size_t>(reflect(start + static_cast<long long>(n)))];
    const auto spectrum = fft.forward();
    auto row = out.mags.row(t);
    for (std::size_t k = 0; k < bins; ++k) row[k] = std::abs(spectrum[k]);
  }
  return out;
}

Spectrogram hpss_percussive(const Spectrogram& spec) {
  const std::size_t frames = spec.frame_count();
  const std::size_t bins = spec.bin_count();
  const std::size_t half = kHpssKernel / 2;
  Spectrogram out = spec;
  std::vector<double> scratch;
  scratch.reserve(kHpssKernel);

  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t t_lo = t >= half ? t - half : 0;
    const std::size_t t_hi = std::min(frames, t + half + 1);
    for (std::size_t k = 0; k < bins; ++k) {
      scratch.clear();
      for (std::size_t u = t_lo; u < t_hi; ++u) scratch.push_back(spec.mags(u, k));
      const double harmonic = median_inplace(scratch);

      const std::size_t k_lo = k >= half ? k - half : 0;
      const std::size_t k_hi = std::min(bins, k + half + 1);
      scratch.assign(spec.mags.row(t).begin() + static_cast<std::ptrdiff_t>(k_lo),
                     spec.mags.row(t).begin() + static_cast<std::ptrdiff_t>(k_hi));
      const double percussive = median_inplace(scratch);

      const double p2 = percussive * percussive;
      const double mask = p2 / (harmonic * harmonic + p2 + 1e-10);
      out.mags(t, k) = spec.mags(t, k) * mask;
    }
  }
  return out;
}

FeatureTrack onset_envelope(const Spectrogram& perc) {
  const std::size_t frames = perc.frame_count();
  const std::size_t bins = perc.bin_count();
  FeatureTrack out;
  out.kind = FeatureKind::Onset;
  out.rate = perc.frame_rate();
  out.frames = Matrix(frames, 1);

  double peak = 0.0;
  for (std::size_t t = 1; t < frames; ++t) {
    double flux = 0.0;
    for (std::size_t k = 0; k < bins; ++k)
      flux += std::max(0.0, std::log1p(perc.mags(t, k)) - std::log1p(perc.mags(t - 1, k)));
    flux /= static_cast<double>(bins);
    out.frames(t, 0) = flux;
    peak = std::max(peak, flux);
  }
  if (peak > 0.0)
    for (double& v : out.frames.values()) v /= peak;
  return out;
}

FeatureTrack chroma(const Spectrogram& spec) {
  constexpr double kMinHz = 55.0;
  constexpr double kMaxHz = 8000.0;
  constexpr double kSilence = 1e-8;

  const std::size_t frames = spec.frame_count();
  const std::size_t bins = spec.bin_count();
  std::vector<int> pitch_class(bins, -1);
  for (std::size_t k = 1; k < bins; ++k) {
    const double hz = static_cast<double>(k) * spec.sample_rate / static_cast<double>(spec.fft_size);
    if (hz < kMinHz || hz > kMaxHz) continue;
    const auto midi = static_cast<long>(std::lround(12.0 * std::log2(hz / 440.0) + 69.0));
    pitch_class[k] = static_cast<int>(((midi % 12) + 12) % 12);
  }

  FeatureTrack out;
  out.kind = FeatureKind::Chroma;
  out.rate = spec.frame_rate();
  out.frames = Matrix(frames, kPitchClasses);
  for (std::size_t t = 0; t < frames; ++t) {
    auto row = out.frames.row(t);
    for (std::size_t k = 0; k < bins; ++k) {
      if (pitch_class[k] < 0) continue;
      const double m = spec.mags(t, k);
      row[static_cast<std::size_t>(pitch_class[k])] += m * m;
    }
    double total = 0.0;
    for (double v : row) total += v;
    if (total < kSilence) {
      std::fill(row.begin(), row.end(), 0.0);
    } else {
      for (double& v : row) v /= total;
    }
  }
  return out;
}

}  // namespace lav
