#include "lav/mapping.hpp"

#include <cmath>
#include <string>

#include "lav/error.hpp"
#include "lav/prng.hpp"

namespace lav {
namespace {

bool rates_match(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

void require_aligned(std::size_t frames, double rate, const FeatureTrack& feature, const char* what) {
  if (!rates_match(rate, feature.rate))
    throw Error(Errc::RateMismatch, std::string(what) + " rate " + std::to_string(feature.rate) +
                                        " Hz differs from track rate " + std::to_string(rate) + " Hz");
  if (feature.frame_count() != frames)
    throw Error(Errc::LengthMismatch, std::string(what) + " has " + std::to_string(feature.frame_count()) +
                                          " frames, track has " + std::to_string(frames));
}

}  // namespace

void MapParams::validate() const {
  if (!(y > 0.0) || !std::isfinite(y)) throw Error(Errc::InvalidArgument, "y must be positive");
  if (!(c >= 0.0) || !std::isfinite(c)) throw Error(Errc::InvalidArgument, "c must be non-negative");
  if (!(lambda_chroma >= 0.0 && lambda_chroma <= 1.0))
    throw Error(Errc::InvalidArgument, "lambda_chroma must lie in [0, 1]");
}

ProjectionMatrix init_projection(std::uint64_t seed, std::size_t in_dim, std::size_t out_dim) {
  if (in_dim == 0 || out_dim == 0) throw Error(Errc::InvalidArgument, "projection dims must be positive");
  ProjectionMatrix p{Matrix(out_dim, in_dim), seed};
  GaussianStream gauss(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(in_dim));
  for (double& w : p.weights.values()) w = gauss.next() * scale;
  return p;
}

LatentTrack project(const ProjectionMatrix& p, const EmbeddingSequence& emb) {
  if (emb.dim() != p.in_dim())
    throw Error(Errc::DimMismatch, "embedding dim " + std::to_string(emb.dim()) + " vs projection input " +
                                       std::to_string(p.in_dim()));
  LatentTrack out{Matrix(emb.frame_count(), p.out_dim()), emb.rate};
  for (std::size_t t = 0; t < emb.frame_count(); ++t) {
    const auto e = emb.frames.row(t);
    auto o = out.frames.row(t);
    for (std::size_t r = 0; r < p.out_dim(); ++r) {
      const auto w = p.weights.row(r);
      double acc = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * e[i];
      o[r] = acc;
    }
  }
  return out;
}

LatentTrack standardize_track(const LatentTrack& track) {
  const std::size_t frames = track.frame_count();
  if (frames < 2) throw Error(Errc::TooFewFrames, "standardization needs at least 2 frames");
  const auto moments = column_moments(track.frames);
  LatentTrack out{Matrix(frames, track.frames.cols()), track.rate};
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t d = 0; d < track.frames.cols(); ++d)
      out.frames(t, d) = moments.std[d] < 1e-8 ? 0.0 : (track.frames(t, d) - moments.mean[d]) / moments.std[d];
  return out;
}

LatentTrack leaky_tanh(const LatentTrack& track, double c) {
  if (!(c >= 0.0)) throw Error(Errc::InvalidArgument, "c must be non-negative");
  LatentTrack out = track;
  for (double& v : out.frames.values()) v = leaky_tanh(v, c);
  return out;
}

std::vector<double> chroma_mean(const LatentStats& stats, std::span<const double> chroma_frame, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(Errc::InvalidArgument, "lambda must lie in [0, 1]");
  if (chroma_frame.size() != kPitchClasses) throw Error(Errc::BadChroma, "chroma frame must have 12 entries");
  if (stats.anchors.rows() != kPitchClasses || stats.anchors.cols() != stats.latent_dim())
    throw Error(Errc::InvalidStats, "anchors must be 12 x latent_dim");
  double total = 0.0;
  for (double v : chroma_frame) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(Errc::BadChroma, "chroma entries must be finite and >= 0");
    total += v;
  }
  if (total != 0.0 && std::abs(total - 1.0) > 1e-6)
    throw Error(Errc::BadChroma, "non-zero chroma frame sums to " + std::to_string(total));

  const std::size_t dim = stats.latent_dim();
  std::vector<double> out(dim);
  if (total == 0.0) {
    out = stats.mean;
  } else {
    for (std::size_t k = 0; k < kPitchClasses; ++k) {
      if (chroma_frame[k] == 0.0) continue;
      const auto anchor = stats.anchors.row(k);
      for (std::size_t d = 0; d < dim; ++d) out[d] += chroma_frame[k] * anchor[d];
    }
  }
  for (std::size_t d = 0; d < dim; ++d) out[d] = (1.0 - lambda) * stats.mean[d] + lambda * out[d];
  return out;
}

LatentTrack to_w(const LatentTrack& track, const LatentStats& stats, const FeatureTrack& chroma,
                 const MapParams& params) {
  params.validate();
  if (chroma.kind != FeatureKind::Chroma || chroma.frames.cols() != kPitchClasses)
    throw Error(Errc::BadChroma, "to_w needs a 12-column chroma track");
  require_aligned(track.frame_count(), track.rate, chroma, "chroma");
  if (track.frames.cols() != stats.latent_dim())
    throw Error(Errc::DimMismatch, "track dim " + std::to_string(track.frames.cols()) + " vs latent_dim " +
                                       std::to_string(stats.latent_dim()));

  LatentTrack out{Matrix(track.frame_count(), stats.latent_dim()), track.rate};
  for (std::size_t t = 0; t < track.frame_count(); ++t) {
    const auto mean_term = chroma_mean(stats, chroma.frames.row(t), params.lambda_chroma);
    const auto in = track.frames.row(t);
    auto o = out.frames.row(t);
    for (std::size_t d = 0; d < o.size(); ++d) o[d] = mean_term[d] + params.y * stats.std[d] * in[d];
  }
  return out;
}

LatentTrack onset_blend(const LatentTrack& a, const LatentTrack& b, const FeatureTrack& onset) {
  if (a.frame_count() != b.frame_count() || a.frames.cols() != b.frames.cols())
    throw Error(Errc::LengthMismatch, "blend inputs differ in shape");
  if (!rates_match(a.rate, b.rate)) throw Error(Errc::RateMismatch, "blend inputs differ in rate");
  if (onset.frames.cols() != 1) throw Error(Errc::InvalidArgument, "onset track must have one column");
  require_aligned(a.frame_count(), a.rate, onset, "onset");

  LatentTrack out{Matrix(a.frame_count(), a.frames.cols()), a.rate};
  for (std::size_t t = 0; t < a.frame_count(); ++t) {
    const double o = onset.frames(t, 0);
    if (!(o >= 0.0 && o <= 1.0)) throw Error(Errc::InvalidArgument, "onset weights must lie in [0, 1]");
    const auto ra = a.frames.row(t);
    const auto rb = b.frames.row(t);
    auto ro = out.frames.row(t);
    for (std::size_t d = 0; d < ro.size(); ++d) ro[d] = (1.0 - o) * ra[d] + o * rb[d];
  }
  return out;
}

LatentTrack map_single_path(const EmbeddingSequence& emb, const LatentStats& stats, const FeatureTrack& chroma,
                            const MapParams& params, std::uint64_t projection_seed) {
  const auto p = init_projection(projection_seed, emb.dim(), stats.latent_dim());
  const auto activated = leaky_tanh(standardize_track(project(p, emb)), params.c);
  return to_w(activated, stats, chroma, params);
}

LatentTrack map_pipeline(const EmbeddingSequence& emb, const LatentStats& stats, const FeatureTrack& chroma,
                         const FeatureTrack& onset, const MapParams& params) {
  params.validate();
  stats.validate();
  for (double v : emb.frames.values())
    if (!std::isfinite(v)) throw Error(Errc::NonFinite, "non-finite embedding value");
  const auto a = map_single_path(emb, stats, chroma, params, params.seed);
  const auto b = map_single_path(emb, stats, chroma, params, secondary_seed(params.seed));
  return onset_blend(a, b, onset);
}

}  // namespace lav
