#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lav/features.hpp"
#include "lav/mapping.hpp"
#include "lav/matrix.hpp"

namespace lav {

/// Half-open layer index range [begin, end).
struct LayerRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool contains(std::size_t layer) const noexcept { return layer >= begin && layer < end; }
  bool operator==(const LayerRange&) const = default;
};

struct LayerGroups {
  LayerRange coarse;
  LayerRange middle;
  LayerRange fine;

  /// Throws Error{BadLayerCount} unless the three non-empty ranges tile [0, num_layers) in order.
  void validate(std::size_t num_layers) const;
};

struct SmoothingWindows {
  std::size_t coarse = 25;
  std::size_t middle = 13;
  std::size_t fine = 5;

  /// Throws Error{InvalidArgument} unless all are odd and coarse >= middle >= fine >= 1.
  void validate() const;
};

/// F x L x latent_dim style vectors, frame-major then layer-major.
class StyleTrajectory {
 public:
  StyleTrajectory() = default;
  StyleTrajectory(std::size_t frames, std::size_t layers, std::size_t latent_dim, double fps)
      : frames_(frames), layers_(layers), dim_(latent_dim), fps_(fps), data_(frames * layers * latent_dim, 0.0) {}

  std::size_t frame_count() const noexcept { return frames_; }
  std::size_t num_layers() const noexcept { return layers_; }
  std::size_t latent_dim() const noexcept { return dim_; }
  double fps() const noexcept { return fps_; }

  std::span<double> style(std::size_t frame, std::size_t layer) {
    return {data_.data() + (frame * layers_ + layer) * dim_, dim_};
  }
  std::span<const double> style(std::size_t frame, std::size_t layer) const {
    return {data_.data() + (frame * layers_ + layer) * dim_, dim_};
  }
  double& at(std::size_t frame, std::size_t layer, std::size_t d) { return data_[(frame * layers_ + layer) * dim_ + d]; }
  double at(std::size_t frame, std::size_t layer, std::size_t d) const {
    return data_[(frame * layers_ + layer) * dim_ + d];
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

 private:
  std::size_t frames_ = 0;
  std::size_t layers_ = 0;
  std::size_t dim_ = 0;
  double fps_ = 0.0;
  std::vector<double> data_;
};

/// Number of frames resample_frames() produces: floor((T - 1) * dst / src) + 1.
std::size_t resampled_length(std::size_t frames, double src_rate, double dst_rate);

/// Linear interpolation of rows sampled at src_rate onto the grid i / dst_rate.
Matrix resample_frames(const Matrix& frames, double src_rate, double dst_rate);

LatentTrack resample_track(const LatentTrack& track, double dst_rate);
FeatureTrack resample_track(const FeatureTrack& track, double dst_rate);

/// Broadcasts each frame's w to all layers. Needs num_layers >= 3.
StyleTrajectory expand_to_layers(const LatentTrack& track, std::size_t num_layers);

/// coarse [0, min(4, L-2)), middle [.., min(8, L-1)), fine [.., L).
LayerGroups default_groups(std::size_t num_layers);

/// Centered moving average along time per layer, window chosen by the layer's
/// group and shrunk at the clip edges. Throws Error{WindowTooLarge} if a window exceeds 2F - 1.
StyleTrajectory smooth_hierarchical(const StyleTrajectory& traj, const LayerGroups& groups,
                                    const SmoothingWindows& windows);

// LAVT: "LAVT" u32 version=1, u32 latent_dim, u32 num_layers, f32 fps,
// u64 frame_count, u32 reserved=0, then F*L*dim f32. Little-endian.
inline constexpr std::size_t kLavtHeaderBytes = 32;
std::vector<std::uint8_t> write_trajectory(const StyleTrajectory& traj);
StyleTrajectory read_trajectory(std::span<const std::uint8_t> bytes);

}  // namespace lav
