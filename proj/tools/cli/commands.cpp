#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <ostream>
#include <stdexcept>

#include "lav/lav.hpp"

namespace lav::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes next to the destination and renames, so a failed run leaves no file behind.
void write_file_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  const fs::path target(path);
  fs::path partial = target;
  partial += ".partial";
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + partial.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      out.close();
      fs::remove(partial);
      throw IoError("short write to " + partial.string());
    }
  }
  std::error_code ec;
  fs::rename(partial, target, ec);
  if (ec) {
    fs::remove(partial);
    throw IoError("cannot rename onto " + path + ": " + ec.message());
  }
}

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err, const std::string& level) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("lav", sink);
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::from_str(level));
  return logger;
}

int exit_code_for(Errc code) { return code == Errc::InvalidArgument ? kExitUsage : kExitFormat; }

// Runs `body` and translates failures into exit codes with a message on `err`.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const NumericFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFormat;
  }
}

void require_finite(std::span<const double> values, const char* stage) {
  if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); }))
    throw NumericFailure(std::string("non-finite value after ") + stage);
}

Matrix first_rows(const Matrix& m, std::size_t rows) {
  if (rows == m.rows()) return m;
  Matrix out(rows, m.cols());
  for (std::size_t r = 0; r < rows; ++r) std::copy_n(m.row(r).begin(), m.cols(), out.row(r).begin());
  return out;
}

}  // namespace

int cmd_map(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto log = make_logger(err, config.log_level);
    if (!(config.fps > 0.0) || !std::isfinite(config.fps)) throw Error(Errc::InvalidArgument, "fps must be positive");
    if (config.out_path.empty()) throw Error(Errc::InvalidArgument, "output path is empty");
    config.windows.validate();
    const MapParams params{config.y, config.c, config.lambda_chroma, config.seed};
    params.validate();

    const AudioBuffer audio = load_canonical(read_file(config.audio_path));
    const LatentStats stats = read_stats(read_file(config.stats_path));
    log->info("audio {:.3f} s, stats latent_dim={} num_layers={}", audio.duration_s(), stats.latent_dim(),
              stats.num_layers);

    const Spectrogram spec = stft_magnitude(audio);
    FeatureTrack chroma_track = chroma(spec);
    FeatureTrack onset_track = onset_envelope(hpss_percussive(spec));

    EmbeddingSequence emb = config.embeddings_path ? read_embeddings(read_file(*config.embeddings_path))
                                                   : mock_encode(audio);
    if (std::abs(emb.rate - chroma_track.rate) > 1e-9 * chroma_track.rate)
      throw Error(Errc::RateMismatch, "embeddings at " + std::to_string(emb.rate) + " Hz, features at " +
                                          std::to_string(chroma_track.rate) + " Hz");
    const std::size_t frames = std::min(emb.frame_count(), chroma_track.frame_count());
    if (frames != emb.frame_count() || frames != chroma_track.frame_count())
      log->warn("truncating to {} frames (embeddings {}, features {})", frames, emb.frame_count(),
                chroma_track.frame_count());
    emb.frames = first_rows(emb.frames, frames);
    chroma_track.frames = first_rows(chroma_track.frames, frames);
    onset_track.frames = first_rows(onset_track.frames, frames);

    const LatentTrack w = map_pipeline(emb, stats, chroma_track, onset_track, params);
    require_finite(w.frames.values(), "mapping");
    const LatentTrack video = resample_track(w, config.fps);
    const StyleTrajectory smoothed = smooth_hierarchical(expand_to_layers(video, stats.num_layers),
                                                         default_groups(stats.num_layers), config.windows);
    require_finite(smoothed.values(), "smoothing");
    write_file_atomic(config.out_path, write_trajectory(smoothed));

    const json summary = {
        {"command", "map"},
        {"audio", config.audio_path},
        {"embeddings", config.embeddings_path.value_or("mock")},
        {"stats", config.stats_path},
        {"out", config.out_path},
        {"duration_s", audio.duration_s()},
        {"embedding_frames", frames},
        {"frames", smoothed.frame_count()},
        {"num_layers", smoothed.num_layers()},
        {"latent_dim", smoothed.latent_dim()},
        {"fps", config.fps},
        {"seed", config.seed},
        {"y", config.y},
        {"c", config.c},
        {"lambda_chroma", config.lambda_chroma},
        {"windows", {{"coarse", config.windows.coarse}, {"middle", config.windows.middle}, {"fine", config.windows.fine}}},
    };
    out << summary.dump() << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_stats(const StatsConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const EmbeddingSequence samples = read_embeddings(read_file(config.samples_path));
    const LatentStats stats = compute_stats(samples.frames, config.num_layers, config.anchor_seed);
    write_file_atomic(config.out_path, write_stats(stats));
    const json summary = {
        {"command", "stats"},         {"samples", config.samples_path},   {"out", config.out_path},
        {"sample_count", stats.sample_count}, {"latent_dim", stats.latent_dim()}, {"num_layers", stats.num_layers},
        {"anchor_seed", config.anchor_seed},
    };
    out << summary.dump() << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_mock_encode(const std::string& audio_path, const std::string& out_path, std::ostream& out,
                    std::ostream& err) {
  return guarded(err, [&] {
    const EmbeddingSequence emb = mock_encode(load_canonical(read_file(audio_path)));
    write_file_atomic(out_path, write_embeddings(emb));
    const json summary = {{"command", "mock-encode"}, {"audio", audio_path}, {"out", out_path},
                          {"frames", emb.frame_count()}, {"dim", emb.dim()}, {"rate", emb.rate}};
    out << summary.dump() << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_inspect(const std::string& path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto bytes = read_file(path);
    const std::string magic(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(4, bytes.size())));
    if (magic == "LAVE") {
      const auto seq = read_embeddings(bytes);
      out << "format=LAVE version=1 dim=" << seq.dim() << " rate=" << seq.rate << " frame_count=" << seq.frame_count()
          << '\n';
    } else if (magic == "LAVS") {
      const auto stats = read_stats(bytes);
      out << "format=LAVS version=1 latent_dim=" << stats.latent_dim() << " num_layers=" << stats.num_layers
          << " sample_count=" << stats.sample_count << '\n';
    } else if (magic == "LAVT") {
      const auto traj = read_trajectory(bytes);
      out << "format=LAVT version=1 latent_dim=" << traj.latent_dim() << " num_layers=" << traj.num_layers()
          << " fps=" << traj.fps() << " frame_count=" << traj.frame_count() << '\n';
    } else {
      throw Error(Errc::BadMagic, path + " is not a LAVE, LAVS or LAVT file");
    }
    return static_cast<int>(kExitOk);
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audio-driven style-latent trajectory engine", "lav"};
  app.require_subcommand(1);

  RunConfig map_config;
  std::string embeddings;
  auto* map = app.add_subcommand("map", "Map audio (+ embeddings) to a smoothed per-layer style trajectory");
  map->add_option("--audio", map_config.audio_path, "Input WAV file")->required();
  map->add_option("--embeddings", embeddings, "LAVE embeddings; omitted = built-in mock encoder");
  map->add_option("--stats", map_config.stats_path, "LAVS style-space statistics")->required();
  map->add_option("--out", map_config.out_path, "Output LAVT trajectory")->required();
  map->add_option("--seed", map_config.seed, "Projection seed")->capture_default_str();
  map->add_option("--y", map_config.y, "Style std scale")->capture_default_str();
  map->add_option("--c", map_config.c, "Leaky tanh slope")->capture_default_str();
  map->add_option("--lambda-chroma", map_config.lambda_chroma, "Chroma anchor mix strength")->capture_default_str();
  map->add_option("--fps", map_config.fps, "Output frame rate")->capture_default_str();
  map->add_option("--win-coarse", map_config.windows.coarse, "Coarse-layer window (frames)")->capture_default_str();
  map->add_option("--win-middle", map_config.windows.middle, "Middle-layer window (frames)")->capture_default_str();
  map->add_option("--win-fine", map_config.windows.fine, "Fine-layer window (frames)")->capture_default_str();
  map->add_option("--log-level", map_config.log_level, "trace|debug|info|warn|error|off")
      ->capture_default_str()
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}));

  StatsConfig stats_config;
  auto* stats = app.add_subcommand("stats", "Compute LAVS statistics from a LAVE file of w samples");
  stats->add_option("--samples", stats_config.samples_path, "LAVE file with N x latent_dim w rows")->required();
  stats->add_option("--num-layers", stats_config.num_layers, "Style inputs of the generator")->capture_default_str();
  stats->add_option("--anchor-seed", stats_config.anchor_seed, "Seed of the anchor partition")->capture_default_str();
  stats->add_option("--out", stats_config.out_path, "Output LAVS file")->required();

  std::string encode_audio;
  std::string encode_out;
  auto* encode = app.add_subcommand("mock-encode", "Write mock codec embeddings (LAVE) for a WAV file");
  encode->add_option("--audio", encode_audio, "Input WAV file")->required();
  encode->add_option("--out", encode_out, "Output LAVE file")->required();

  std::string inspect_path;
  auto* inspect = app.add_subcommand("inspect", "Print the header of a LAVE, LAVS or LAVT file");
  inspect->add_option("path", inspect_path, "File to inspect")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (map->parsed()) {
    if (!embeddings.empty()) map_config.embeddings_path = embeddings;
    return cmd_map(map_config, out, err);
  }
  if (stats->parsed()) return cmd_stats(stats_config, out, err);
  if (encode->parsed()) return cmd_mock_encode(encode_audio, encode_out, out, err);
  return cmd_inspect(inspect_path, out, err);
}

}  // namespace lav::cli
