#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lav/trajectory.hpp"

namespace lav::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitFormat = 2,
  kExitNumeric = 3,
};

struct RunConfig {
  std::string audio_path;
  std::optional<std::string> embeddings_path;  // absent: mock encoder
  std::string stats_path;
  std::string out_path;
  std::uint64_t seed = 42;
  double y = 1.0;
  double c = 0.02;
  double lambda_chroma = 0.5;
  double fps = 30.0;
  SmoothingWindows windows;
  std::string log_level = "info";
};

struct StatsConfig {
  std::string samples_path;
  std::uint32_t num_layers = 18;
  std::uint64_t anchor_seed = 42;
  std::string out_path;
};

/// Full audio -> LAVT pipeline. Prints a one-line JSON summary on `out`.
int cmd_map(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_stats(const StatsConfig& config, std::ostream& out, std::ostream& err);
int cmd_mock_encode(const std::string& audio_path, const std::string& out_path, std::ostream& out,
                    std::ostream& err);
int cmd_inspect(const std::string& path, std::ostream& out, std::ostream& err);

/// Entry point shared by the executable and the tests; args exclude argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lav::cli
