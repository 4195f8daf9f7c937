#include "fixtures.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <stdexcept>

namespace lav::test {

AudioBuffer sine(double hz, double seconds, int rate, double amplitude) {
  AudioBuffer buf;
  buf.sample_rate = rate;
  buf.samples.resize(static_cast<std::size_t>(std::llround(seconds * rate)));
  for (std::size_t i = 0; i < buf.samples.size(); ++i)
    buf.samples[i] = amplitude * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / rate);
  return buf;
}

AudioBuffer silence(double seconds, int rate) {
  AudioBuffer buf;
  buf.sample_rate = rate;
  buf.samples.assign(static_cast<std::size_t>(std::llround(seconds * rate)), 0.0);
  return buf;
}

AudioBuffer clicks(const std::vector<std::size_t>& positions, std::size_t length, double amplitude) {
  AudioBuffer buf;
  buf.samples.assign(length, 0.0);
  for (std::size_t p : positions) buf.samples.at(p) = amplitude;
  return buf;
}

AudioBuffer white_noise(double seconds, std::uint64_t seed, double amplitude) {
  AudioBuffer buf;
  buf.samples.resize(static_cast<std::size_t>(std::llround(seconds * kCanonicalRate)));
  Xoshiro256 rng(seed);
  for (double& s : buf.samples) s = amplitude * (2.0 * rng.uniform() - 1.0);
  return buf;
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Matrix m(rows, cols);
  GaussianStream g(seed);
  for (double& v : m.values()) v = g.next();
  return m;
}

LatentStats random_stats(std::size_t latent_dim, std::uint32_t num_layers, std::uint64_t seed) {
  GaussianStream g(seed);
  LatentStats stats;
  stats.mean.resize(latent_dim);
  stats.std.resize(latent_dim);
  for (double& v : stats.mean) v = g.next();
  for (double& v : stats.std) v = 0.5 + std::abs(g.next());
  stats.anchors = Matrix(kPitchClasses, latent_dim);
  for (double& v : stats.anchors.values()) v = g.next();
  stats.num_layers = num_layers;
  stats.sample_count = 1000;
  return stats;
}

FeatureTrack flat_chroma(std::size_t frames, double rate) {
  return {Matrix(frames, kPitchClasses, 1.0 / 12.0), rate, FeatureKind::Chroma};
}

FeatureTrack constant_onset(std::size_t frames, double rate, double value) {
  return {Matrix(frames, 1, value), rate, FeatureKind::Onset};
}

// Two seconds of 44.1 kHz stereo: a chord plus a few clicks.
AudioBuffer two_second_clip() {
  AudioBuffer buf;
  buf.sample_rate = 44100;
  buf.channels = 2;
  buf.samples.resize(2 * 88200);
  for (std::size_t i = 0; i < 88200; ++i) {
    const double t = static_cast<double>(i) / 44100.0;
    const double chord = 0.2 * std::sin(2 * std::numbers::pi * 261.63 * t) +
                         0.15 * std::sin(2 * std::numbers::pi * 329.63 * t) +
                         0.1 * std::sin(2 * std::numbers::pi * 392.0 * t);
    const double click = (i % 22050 == 1000) ? 0.5 : 0.0;
    buf.samples[2 * i] = chord + click;
    buf.samples[2 * i + 1] = chord - click;
  }
  return buf;
}

TempDir::TempDir() {
  std::random_device rd;
  root_ = std::filesystem::temp_directory_path() / ("lav_test_" + std::to_string(rd()) + std::to_string(rd()));
  std::filesystem::create_directories(root_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(root_, ec);
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace lav::test
