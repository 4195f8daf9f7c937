#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lav/audio.hpp"
#include "lav/matrix.hpp"

namespace lav {

inline constexpr std::size_t kEmbeddingDim = 128;
inline constexpr double kEmbeddingRate = 50.0;
inline constexpr std::size_t kMinStatsSamples = 24;

/// Codec embedding frames (T x D) and their frame rate.
struct EmbeddingSequence {
  Matrix frames;
  double rate = kEmbeddingRate;

  std::size_t frame_count() const noexcept { return frames.rows(); }
  std::size_t dim() const noexcept { return frames.cols(); }
};

/// Statistics of the generator's style space: per-dimension mean and std,
/// 12 pitch anchors, and the number of per-layer style inputs.
struct LatentStats {
  std::vector<double> mean;
  std::vector<double> std;
  Matrix anchors;  // kPitchClasses x latent_dim
  std::uint32_t num_layers = 18;
  std::uint64_t sample_count = 0;

  std::size_t latent_dim() const noexcept { return mean.size(); }

  /// Throws Error{InvalidStats} on shape problems or non-positive / non-finite std.
  void validate() const;
};

struct ColumnMoments {
  std::vector<double> mean;
  std::vector<double> std;  // population (1/N)
};

/// Per-column mean and population standard deviation of a non-empty matrix.
ColumnMoments column_moments(const Matrix& samples);

/// Needs at least kMinStatsSamples rows. std is floored at 1e-6. Anchors are
/// the means of a seeded random partition of the rows into 12 near-equal groups.
LatentStats compute_stats(const Matrix& w_samples, std::uint32_t num_layers, std::uint64_t anchor_seed);

// LAVE: "LAVE" u32 version=1, u32 dim, f32 rate, u64 frame_count, 8 reserved
// zero bytes, then frame_count*dim f32 row-major. All little-endian.
inline constexpr std::size_t kLaveHeaderBytes = 32;
std::vector<std::uint8_t> write_embeddings(const EmbeddingSequence& seq);
EmbeddingSequence read_embeddings(std::span<const std::uint8_t> bytes);

// LAVS: "LAVS" u32 version=1, u32 latent_dim, u32 num_layers, mean, std,
// 12*latent_dim anchors (f32), u64 sample_count.
inline constexpr std::size_t kLavsHeaderBytes = 16;
std::vector<std::uint8_t> write_stats(const LatentStats& stats);
LatentStats read_stats(std::span<const std::uint8_t> bytes);

/// Stand-in encoder: 128 log-mel band energies (0-12 kHz, HTK mel scale) per
/// 50 Hz STFT frame, standardized per dimension over the clip.
EmbeddingSequence mock_encode(const AudioBuffer& buf);

/// Triangular mel filterbank (bands x bins) applied to power spectra.
Matrix mel_filterbank(std::size_t bands, std::size_t fft_size, int sample_rate, double min_hz, double max_hz);

}  // namespace lav
