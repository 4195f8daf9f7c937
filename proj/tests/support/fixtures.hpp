#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lav/lav.hpp"

namespace lav::test {

AudioBuffer sine(double hz, double seconds, int rate = kCanonicalRate, double amplitude = 0.5);
AudioBuffer silence(double seconds, int rate = kCanonicalRate);
/// Unit impulses of `amplitude` at the given sample indices.
AudioBuffer clicks(const std::vector<std::size_t>& positions, std::size_t length, double amplitude = 1.0);
/// Two seconds of 44.1 kHz stereo: a C major chord with a click every 0.5 s.
AudioBuffer two_second_clip();
AudioBuffer white_noise(double seconds, std::uint64_t seed, double amplitude = 0.3);

/// i.i.d. standard normals.
Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Stats with mean/std/anchors drawn from seeded Gaussians (std = 0.5 + |g|).
LatentStats random_stats(std::size_t latent_dim, std::uint32_t num_layers, std::uint64_t seed);

/// Uniform chroma track (every row 1/12) at the given rate.
FeatureTrack flat_chroma(std::size_t frames, double rate);
FeatureTrack constant_onset(std::size_t frames, double rate, double value);

/// Self-deleting scratch directory.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::filesystem::path path(const std::string& name) const { return root_ / name; }

 private:
  std::filesystem::path root_;
};

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

}  // namespace lav::test
