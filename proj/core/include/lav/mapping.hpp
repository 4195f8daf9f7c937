#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lav/features.hpp"
#include "lav/latent.hpp"
#include "lav/matrix.hpp"

namespace lav {

struct MapParams {
  double y = 1.0;              // scale applied to the style-space std
  double c = 0.02;             // linear leak of the activation
  double lambda_chroma = 0.5;  // 0 = plain mean, 1 = pure chroma anchor mix
  std::uint64_t seed = 42;

  /// Throws Error{InvalidArgument} when y <= 0, c < 0 or lambda outside [0, 1].
  void validate() const;
};

/// Random linear map from embedding space (in_dim) to style space (out_dim).
struct ProjectionMatrix {
  Matrix weights;  // out_dim x in_dim
  std::uint64_t seed = 0;

  std::size_t in_dim() const noexcept { return weights.cols(); }
  std::size_t out_dim() const noexcept { return weights.rows(); }
};

/// Per-frame style vectors (T x latent_dim) before layer expansion.
struct LatentTrack {
  Matrix frames;
  double rate = 0.0;

  std::size_t frame_count() const noexcept { return frames.rows(); }
};

/// Seed of the second projection path.
constexpr std::uint64_t secondary_seed(std::uint64_t seed) noexcept { return seed ^ 0x9E3779B97F4A7C15ULL; }

/// Gaussian(0, 1/in_dim) weights drawn row-major from GaussianStream(seed).
ProjectionMatrix init_projection(std::uint64_t seed, std::size_t in_dim, std::size_t out_dim);

LatentTrack project(const ProjectionMatrix& p, const EmbeddingSequence& emb);

/// Per-dimension zero mean / unit population std over time; dims with std < 1e-8 become 0.
LatentTrack standardize_track(const LatentTrack& track);

inline double leaky_tanh(double x, double c) { return std::tanh(x) + c * x; }
LatentTrack leaky_tanh(const LatentTrack& track, double c);

/// (1 - lambda) * mean + lambda * sum_k chroma_k * anchors[k]. An all-zero chroma
/// frame mixes to stats.mean.
std::vector<double> chroma_mean(const LatentStats& stats, std::span<const double> chroma_frame, double lambda);

/// frames[t] = chroma_mean(stats, chroma[t], lambda) + y * std (.) track[t].
LatentTrack to_w(const LatentTrack& track, const LatentStats& stats, const FeatureTrack& chroma,
                 const MapParams& params);

/// frames[t] = (1 - o_t) a[t] + o_t b[t].
LatentTrack onset_blend(const LatentTrack& a, const LatentTrack& b, const FeatureTrack& onset);

/// project -> standardize -> leaky tanh -> to_w for one projection seed.
LatentTrack map_single_path(const EmbeddingSequence& emb, const LatentStats& stats, const FeatureTrack& chroma,
                            const MapParams& params, std::uint64_t projection_seed);

/// Two paths (params.seed and secondary_seed(params.seed)) blended by onset strength.
LatentTrack map_pipeline(const EmbeddingSequence& emb, const LatentStats& stats, const FeatureTrack& chroma,
                         const FeatureTrack& onset, const MapParams& params);

}  // namespace lav
