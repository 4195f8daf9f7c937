#include "lav/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "byte_io.hpp"
#include "lav/error.hpp"

namespace lav {
namespace {

constexpr std::uint32_t kFormatVersion = 1;

std::size_t window_for(std::size_t layer, const LayerGroups& groups, const SmoothingWindows& windows) {
  if (groups.coarse.contains(layer)) return windows.coarse;
  if (groups.middle.contains(layer)) return windows.middle;
  return windows.fine;
}

}  // namespace

void LayerGroups::validate(std::size_t num_layers) const {
  const bool ok = coarse.begin == 0 && coarse.size() > 0 && middle.begin == coarse.end && middle.size() > 0 &&
                  fine.begin == middle.end && fine.size() > 0 && fine.end == num_layers &&
                  coarse.end > coarse.begin && middle.end > middle.begin && fine.end > fine.begin;
  if (!ok) throw Error(Errc::BadLayerCount, "layer groups must tile [0, " + std::to_string(num_layers) + ")");
}

void SmoothingWindows::validate() const {
  for (std::size_t w : {coarse, middle, fine})
    if (w == 0 || w % 2 == 0) throw Error(Errc::InvalidArgument, "smoothing windows must be odd and positive");
  if (!(coarse >= middle && middle >= fine))
    throw Error(Errc::InvalidArgument, "smoothing windows must satisfy coarse >= middle >= fine");
}

std::size_t resampled_length(std::size_t frames, double src_rate, double dst_rate) {
  if (frames < 2) throw Error(Errc::TooFewFrames, "resampling needs at least 2 frames");
  if (!(src_rate > 0.0) || !(dst_rate > 0.0)) throw Error(Errc::InvalidArgument, "rates must be positive");
  // The epsilon keeps exact ratios (e.g. 99 * 2/1) from flooring one short.
  const double span = static_cast<double>(frames - 1) * dst_rate / src_rate;
  return static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
}

Matrix resample_frames(const Matrix& frames, double src_rate, double dst_rate) {
  const std::size_t out_len = resampled_length(frames.rows(), src_rate, dst_rate);
  const std::size_t last = frames.rows() - 1;
  Matrix out(out_len, frames.cols());
  for (std::size_t i = 0; i < out_len; ++i) {
    const double pos = static_cast<double>(i) * src_rate / dst_rate;
    const auto j = static_cast<std::size_t>(std::floor(pos));
    auto o = out.row(i);
    if (j >= last) {
      std::copy_n(frames.row(last).begin(), o.size(), o.begin());
      continue;
    }
    const double frac = pos - static_cast<double>(j);
    const auto a = frames.row(j);
    const auto b = frames.row(j + 1);
    for (std::size_t d = 0; d < o.size(); ++d) o[d] = a[d] + frac * (b[d] - a[d]);
  }
  return out;
}

LatentTrack resample_track(const LatentTrack& track, double dst_rate) {
  return {resample_frames(track.frames, track.rate, dst_rate), dst_rate};
}

FeatureTrack resample_track(const FeatureTrack& track, double dst_rate) {
  return {resample_frames(track.frames, track.rate, dst_rate), dst_rate, track.kind};
}

StyleTrajectory expand_to_layers(const LatentTrack& track, std::size_t num_layers) {
  if (num_layers < 3) throw Error(Errc::BadLayerCount, "need at least 3 layers, got " + std::to_string(num_layers));
  if (track.frame_count() == 0) throw Error(Errc::TooFewFrames, "empty track");
  StyleTrajectory traj(track.frame_count(), num_layers, track.frames.cols(), track.rate);
  for (std::size_t f = 0; f < track.frame_count(); ++f) {
    const auto w = track.frames.row(f);
    for (std::size_t l = 0; l < num_layers; ++l) std::copy(w.begin(), w.end(), traj.style(f, l).begin());
  }
  return traj;
}

LayerGroups default_groups(std::size_t num_layers) {
  if (num_layers < 3) throw Error(Errc::BadLayerCount, "need at least 3 layers, got " + std::to_string(num_layers));
  const std::size_t coarse_end = std::min<std::size_t>(4, num_layers - 2);
  const std::size_t middle_end = std::min<std::size_t>(8, num_layers - 1);
  return {{0, coarse_end}, {coarse_end, middle_end}, {middle_end, num_layers}};
}

StyleTrajectory smooth_hierarchical(const StyleTrajectory& traj, const LayerGroups& groups,
                                    const SmoothingWindows& windows) {
  windows.validate();
  groups.validate(traj.num_layers());
  const std::size_t frames = traj.frame_count();
  if (frames == 0) throw Error(Errc::TooFewFrames, "empty trajectory");
  if (windows.coarse > 2 * frames - 1)
    throw Error(Errc::WindowTooLarge, "window " + std::to_string(windows.coarse) + " exceeds 2F-1 = " +
                                          std::to_string(2 * frames - 1));

  StyleTrajectory out(frames, traj.num_layers(), traj.latent_dim(), traj.fps());
  for (std::size_t l = 0; l < traj.num_layers(); ++l) {
    const std::size_t half = (window_for(l, groups, windows) - 1) / 2;
    for (std::size_t f = 0; f < frames; ++f) {
      const std::size_t lo = f >= half ? f - half : 0;
      const std::size_t hi = std::min(frames, f + half + 1);
      const auto count = static_cast<double>(hi - lo);
      auto o = out.style(f, l);
      for (std::size_t u = lo; u < hi; ++u) {
        const auto in = traj.style(u, l);
        for (std::size_t d = 0; d < o.size(); ++d) o[d] += in[d];
      }
      for (double& v : o) v /= count;
    }
  }
  return out;
}

std::vector<std::uint8_t> write_trajectory(const StyleTrajectory& traj) {
  if (traj.frame_count() == 0 || traj.num_layers() == 0 || traj.latent_dim() == 0)
    throw Error(Errc::InvalidArgument, "trajectory must be non-empty");
  detail::ByteWriter out;
  out.reserve(kLavtHeaderBytes + 4 * traj.values().size());
  out.tag("LAVT");
  out.u32(kFormatVersion);
  out.u32(static_cast<std::uint32_t>(traj.latent_dim()));
  out.u32(static_cast<std::uint32_t>(traj.num_layers()));
  out.f32(static_cast<float>(traj.fps()));
  out.u64(traj.frame_count());
  out.u32(0);
  for (double v : traj.values()) out.f32(static_cast<float>(v));
  return std::move(out).take();
}

StyleTrajectory read_trajectory(std::span<const std::uint8_t> bytes) {
  detail::ByteReader in(bytes);
  if (!in.has(4)) throw Error(Errc::TruncatedPayload, "file shorter than its magic");
  if (!in.tag_is("LAVT")) throw Error(Errc::BadMagic, "expected LAVT");
  if (!in.has(kLavtHeaderBytes)) throw Error(Errc::TruncatedPayload, "header truncated");
  in.skip(4);
  const std::uint32_t version = in.u32();
  if (version != kFormatVersion) throw Error(Errc::BadVersion, "version " + std::to_string(version));
  const std::uint32_t dim = in.u32();
  const std::uint32_t layers = in.u32();
  const float fps = in.f32();
  const std::uint64_t frames = in.u64();
  const std::uint32_t reserved = in.u32();
  if (dim == 0 || layers == 0 || frames == 0) throw Error(Errc::BadHeader, "zero dimension in header");
  if (reserved != 0) throw Error(Errc::BadHeader, "reserved field is not zero");
  if (!std::isfinite(fps) || !(fps > 0.0f)) throw Error(Errc::BadHeader, "fps must be positive");
  const std::uint64_t per_frame = static_cast<std::uint64_t>(dim) * layers;
  const std::size_t cells = in.remaining() / 4;
  if (in.remaining() % 4 != 0 || frames > cells / per_frame || frames * per_frame != cells)
    throw Error(Errc::TruncatedPayload, "declared " + std::to_string(frames) + "x" + std::to_string(layers) + "x" +
                                            std::to_string(dim) + " cells but payload holds " +
                                            std::to_string(in.remaining()) + " bytes");
  StyleTrajectory traj(static_cast<std::size_t>(frames), layers, dim, fps);
  for (double& v : traj.values()) {
    const float f = in.f32();
    if (!std::isfinite(f)) throw Error(Errc::NonFinite, "non-finite value in payload");
    v = f;
  }
  return traj;
}

}  // namespace lav
