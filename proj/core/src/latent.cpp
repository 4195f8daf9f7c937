#include "lav/latent.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "byte_io.hpp"
#include "lav/error.hpp"
#include "lav/features.hpp"
#include "lav/prng.hpp"

namespace lav {
namespace {

constexpr std::uint32_t kFormatVersion = 1;
constexpr double kStdFloor = 1e-6;

void check_magic_and_version(detail::ByteReader& in, std::string_view magic, std::size_t header_bytes) {
  if (!in.has(4)) throw Error(Errc::TruncatedPayload, "file shorter than its magic");
  if (!in.tag_is(magic)) throw Error(Errc::BadMagic, "expected " + std::string(magic));
  if (!in.has(header_bytes)) throw Error(Errc::TruncatedPayload, "header truncated");
  in.skip(4);
  const std::uint32_t version = in.u32();
  if (version != kFormatVersion) throw Error(Errc::BadVersion, "version " + std::to_string(version));
}

// Reads `count` f32 values; the caller has verified the byte count.
void read_floats(detail::ByteReader& in, std::span<double> out) {
  for (double& v : out) {
    const float f = in.f32();
    if (!std::isfinite(f)) throw Error(Errc::NonFinite, "non-finite value in payload");
    v = f;
  }
}

}  // namespace

void LatentStats::validate() const {
  const std::size_t dim = mean.size();
  if (dim == 0) throw Error(Errc::InvalidStats, "latent_dim is zero");
  if (std.size() != dim) throw Error(Errc::InvalidStats, "std length differs from mean length");
  if (anchors.rows() != kPitchClasses || anchors.cols() != dim)
    throw Error(Errc::InvalidStats, "anchors must be 12 x latent_dim");
  if (num_layers == 0) throw Error(Errc::InvalidStats, "num_layers is zero");
  for (double s : std)
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(Errc::InvalidStats, "std entries must be positive and finite");
  for (double m : mean)
    if (!std::isfinite(m)) throw Error(Errc::InvalidStats, "non-finite mean");
  for (double a : anchors.values())
    if (!std::isfinite(a)) throw Error(Errc::InvalidStats, "non-finite anchor");
}

ColumnMoments column_moments(const Matrix& samples) {
  if (samples.rows() == 0 || samples.cols() == 0)
    throw Error(Errc::InvalidArgument, "column_moments needs a non-empty matrix");
  const std::size_t n = samples.rows();
  const std::size_t dim = samples.cols();
  ColumnMoments m{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t d = 0; d < dim; ++d) m.mean[d] += samples(r, d);
  for (double& v : m.mean) v /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t d = 0; d < dim; ++d) {
      const double dev = samples(r, d) - m.mean[d];
      m.std[d] += dev * dev;
    }
  for (double& v : m.std) v = std::sqrt(v / static_cast<double>(n));
  return m;
}

LatentStats compute_stats(const Matrix& w_samples, std::uint32_t num_layers, std::uint64_t anchor_seed) {
  const std::size_t n = w_samples.rows();
  if (n < kMinStatsSamples)
    throw Error(Errc::TooFewSamples, std::to_string(n) + " samples, need at least " +
                                         std::to_string(kMinStatsSamples));
  for (double v : w_samples.values())
    if (!std::isfinite(v)) throw Error(Errc::NonFinite, "non-finite w sample");

  auto moments = column_moments(w_samples);
  LatentStats stats;
  stats.mean = std::move(moments.mean);
  stats.std = std::move(moments.std);
  for (double& s : stats.std) s = std::max(s, kStdFloor);
  stats.num_layers = num_layers;
  stats.sample_count = n;

  // Fisher-Yates shuffle, then position i goes to group i mod 12.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Xoshiro256 rng(anchor_seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1));
    std::swap(order[i], order[j]);
  }
  const std::size_t dim = w_samples.cols();
  stats.anchors = Matrix(kPitchClasses, dim);
  std::vector<std::size_t> counts(kPitchClasses, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t group = i % kPitchClasses;
    auto anchor = stats.anchors.row(group);
    const auto sample = w_samples.row(order[i]);
    for (std::size_t d = 0; d < dim; ++d) anchor[d] += sample[d];
    ++counts[group];
  }
  for (std::size_t g = 0; g < kPitchClasses; ++g)
    for (double& v : stats.anchors.row(g)) v /= static_cast<double>(counts[g]);
  return stats;
}

std::vector<std::uint8_t> write_embeddings(const EmbeddingSequence& seq) {
  if (seq.frame_count() == 0 || seq.dim() == 0)
    throw Error(Errc::InvalidArgument, "embedding sequence must be non-empty");
  detail::ByteWriter out;
  out.reserve(kLaveHeaderBytes + 4 * seq.frames.values().size());
  out.tag("LAVE");
  out.u32(kFormatVersion);
  out.u32(static_cast<std::uint32_t>(seq.dim()));
  out.f32(static_cast<float>(seq.rate));
  out.u64(seq.frame_count());
  out.u32(0);
  out.u32(0);
  for (double v : seq.frames.values()) out.f32(static_cast<float>(v));
  return std::move(out).take();
}

EmbeddingSequence read_embeddings(std::span<const std::uint8_t> bytes) {
  detail::ByteReader in(bytes);
  check_magic_and_version(in, "LAVE", kLaveHeaderBytes);
  const std::uint32_t dim = in.u32();
  const float rate = in.f32();
  const std::uint64_t frames = in.u64();
  const std::uint32_t reserved_a = in.u32();
  const std::uint32_t reserved_b = in.u32();
  if (dim == 0) throw Error(Errc::BadHeader, "dim is zero");
  if (frames == 0) throw Error(Errc::BadHeader, "frame_count is zero");
  if (reserved_a != 0 || reserved_b != 0) throw Error(Errc::BadHeader, "reserved bytes are not zero");
  if (!std::isfinite(rate) || rate < 0.0f) throw Error(Errc::BadHeader, "rate must be finite and non-negative");
  const std::size_t cells = in.remaining() / 4;
  if (in.remaining() % 4 != 0 || frames > cells / dim || frames * dim != cells)
    throw Error(Errc::TruncatedPayload, "declared " + std::to_string(frames) + "x" + std::to_string(dim) +
                                            " cells but payload holds " + std::to_string(in.remaining()) +
                                            " bytes");
  EmbeddingSequence seq;
  seq.rate = rate;
  seq.frames = Matrix(static_cast<std::size_t>(frames), dim);
  read_floats(in, seq.frames.values());
  return seq;
}

std::vector<std::uint8_t> write_stats(const LatentStats& stats) {
  stats.validate();
  const std::size_t dim = stats.latent_dim();
  detail::ByteWriter out;
  out.reserve(kLavsHeaderBytes + 4 * dim * (2 + kPitchClasses) + 8);
  out.tag("LAVS");
  out.u32(kFormatVersion);
  out.u32(static_cast<std::uint32_t>(dim));
  out.u32(stats.num_layers);
  for (double v : stats.mean) out.f32(static_cast<float>(v));
  for (double v : stats.std) out.f32(static_cast<float>(v));
  for (double v : stats.anchors.values()) out.f32(static_cast<float>(v));
  out.u64(stats.sample_count);
  return std::move(out).take();
}

LatentStats read_stats(std::span<const std::uint8_t> bytes) {
  detail::ByteReader in(bytes);
  check_magic_and_version(in, "LAVS", kLavsHeaderBytes);
  const std::uint32_t dim = in.u32();
  const std::uint32_t layers = in.u32();
  if (dim == 0) throw Error(Errc::BadHeader, "latent_dim is zero");
  const std::uint64_t expected = 4ULL * dim * (2 + kPitchClasses) + 8;
  if (in.remaining() != expected)
    throw Error(Errc::TruncatedPayload, "expected " + std::to_string(expected) + " payload bytes, found " +
                                            std::to_string(in.remaining()));
  LatentStats stats;
  stats.num_layers = layers;
  stats.mean.resize(dim);
  stats.std.resize(dim);
  stats.anchors = Matrix(kPitchClasses, dim);
  read_floats(in, stats.mean);
  for (double& v : stats.std) v = in.f32();
  read_floats(in, stats.anchors.values());
  stats.sample_count = in.u64();
  stats.validate();
  return stats;
}

Matrix mel_filterbank(std::size_t bands, std::size_t fft_size, int sample_rate, double min_hz, double max_hz) {
  auto hz_to_mel = [](double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); };
  auto mel_to_hz = [](double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); };

  const std::size_t bins = fft_size / 2 + 1;
  const double mel_lo = hz_to_mel(min_hz);
  const double mel_hi = hz_to_mel(max_hz);
  std::vector<double> edges(bands + 2);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / static_cast<double>(bands + 1));

  Matrix fb(bands, bins);
  for (std::size_t b = 0; b < bands; ++b) {
    const double lo = edges[b];
    const double centre = edges[b + 1];
    const double hi = edges[b + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double hz = static_cast<double>(k) * sample_rate / static_cast<double>(fft_size);
      double w = 0.0;
      if (hz > lo && hz <= centre) {
        w = (hz - lo) / (centre - lo);
      } else if (hz > centre && hz < hi) {
        w = (hi - hz) / (hi - centre);
      }
      fb(b, k) = w;
    }
  }
  return fb;
}

EmbeddingSequence mock_encode(const AudioBuffer& buf) {
  constexpr double kLogFloor = 1e-10;
  const FrameSpec spec;
  const Spectrogram s = stft_magnitude(buf, spec);
  const Matrix fb = mel_filterbank(kEmbeddingDim, spec.fft_size, buf.sample_rate, 0.0, 12000.0);

  EmbeddingSequence seq;
  seq.rate = s.frame_rate();
  seq.frames = Matrix(s.frame_count(), kEmbeddingDim);
  std::vector<double> power(s.bin_count());
  for (std::size_t t = 0; t < s.frame_count(); ++t) {
    const auto mags = s.mags.row(t);
    for (std::size_t k = 0; k < power.size(); ++k) power[k] = mags[k] * mags[k];
    for (std::size_t b = 0; b < kEmbeddingDim; ++b) {
      double energy = 0.0;
      const auto weights = fb.row(b);
      for (std::size_t k = 0; k < power.size(); ++k) energy += weights[k] * power[k];
      seq.frames(t, b) = std::log(energy + kLogFloor);
    }
  }

  const auto moments = column_moments(seq.frames);
  for (std::size_t t = 0; t < seq.frame_count(); ++t)
    for (std::size_t d = 0; d < kEmbeddingDim; ++d) {
      double& v = seq.frames(t, d);
      v = moments.std[d] < 1e-8 ? 0.0 : (v - moments.mean[d]) / moments.std[d];
    }
  return seq;
}

}  // namespace lav
