#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "cli/commands.hpp"
#include "fixtures.hpp"

using namespace lav;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("map runs end to end, deterministically, with the expected frame count") {
  test::TempDir dir;
  const auto wav = dir.path("clip.wav");
  const auto stats = dir.path("stats.lavs");
  test::write_bytes(wav, encode_wav(test::two_second_clip()));
  test::write_bytes(stats, write_stats(test::random_stats(512, 18, 3)));

  const auto first = run_cli({"map", "--audio", wav, "--stats", stats, "--out", dir.path("a.lavt"), "--log-level", "off"});
  REQUIRE_MESSAGE(first.code == 0, first.err);
  const auto second = run_cli({"map", "--audio", wav, "--stats", stats, "--out", dir.path("b.lavt"), "--log-level", "off"});
  REQUIRE(second.code == 0);
  const auto a = test::read_bytes(dir.path("a.lavt"));
  CHECK(a == test::read_bytes(dir.path("b.lavt")));

  const auto traj = read_trajectory(a);
  CHECK(traj.frame_count() == resampled_length(100, 50.0, 30.0));
  CHECK(traj.frame_count() == 60);
  CHECK(traj.num_layers() == 18);
  CHECK(traj.latent_dim() == 512);

  const auto summary = nlohmann::json::parse(first.out);
  CHECK(summary["frames"] == 60);
  CHECK(summary["seed"] == 42);
  CHECK(summary["embeddings"] == "mock");
  CHECK(summary["windows"]["coarse"] == 25);
  CHECK(summary["lambda_chroma"] == 0.5);
  CHECK(!fs::exists(dir.path("a.lavt.partial")));
}

TEST_CASE("map accepts precomputed embeddings and echoes overrides") {
  test::TempDir dir;
  const auto wav = dir.path("clip.wav");
  const auto stats = dir.path("stats.lavs");
  test::write_bytes(wav, encode_wav(test::two_second_clip()));
  test::write_bytes(stats, write_stats(test::random_stats(64, 6, 3)));
  REQUIRE(run_cli({"mock-encode", "--audio", wav, "--out", dir.path("emb.lave")}).code == 0);

  const auto r = run_cli({"map", "--audio", wav, "--embeddings", dir.path("emb.lave"), "--stats", stats, "--out",
                          dir.path("t.lavt"), "--seed", "7", "--y", "0.5", "--c", "0.1", "--lambda-chroma", "0.25",
                          "--fps", "24", "--win-coarse", "9", "--win-middle", "5", "--win-fine", "1", "--log-level", "off"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto summary = nlohmann::json::parse(r.out);
  CHECK(summary["seed"] == 7);
  CHECK(summary["fps"] == 24.0);
  CHECK(summary["windows"]["fine"] == 1);
  CHECK(read_trajectory(test::read_bytes(dir.path("t.lavt"))).frame_count() == resampled_length(100, 50.0, 24.0));

  EmbeddingSequence slow{Matrix(40, 128), 25.0};
  test::write_bytes(dir.path("slow.lave"), write_embeddings(slow));
  const auto mismatch = run_cli({"map", "--audio", wav, "--embeddings", dir.path("slow.lave"), "--stats", stats,
                                 "--out", dir.path("x.lavt"), "--log-level", "off"});
  CHECK(mismatch.code == cli::kExitFormat);
  CHECK(!fs::exists(dir.path("x.lavt")));
}

TEST_CASE("map error paths") {
  test::TempDir dir;
  const auto wav = dir.path("clip.wav");
  test::write_bytes(wav, encode_wav(test::two_second_clip()));
  const auto out = dir.path("never.lavt");

  const auto missing = run_cli({"map", "--audio", wav, "--stats", dir.path("nope.lavs"), "--out", out});
  CHECK(missing.code == cli::kExitFormat);
  CHECK(!missing.err.empty());
  CHECK(!fs::exists(out));

  CHECK(run_cli({"map", "--audio", wav}).code == cli::kExitUsage);
  CHECK(run_cli({}).code == cli::kExitUsage);

  test::write_bytes(dir.path("s.lavs"), write_stats(test::random_stats(8, 18, 1)));
  const auto bad_y = run_cli({"map", "--audio", wav, "--stats", dir.path("s.lavs"), "--out", out, "--y", "-1"});
  CHECK(bad_y.code == cli::kExitUsage);
  const auto even = run_cli({"map", "--audio", wav, "--stats", dir.path("s.lavs"), "--out", out, "--win-fine", "4"});
  CHECK(even.code == cli::kExitUsage);
  CHECK(!fs::exists(out));
}

TEST_CASE("stats command") {
  test::TempDir dir;
  SUBCASE("identical rows give the std floor") {
    EmbeddingSequence rows{Matrix(24, 8, 0.75), 0.0};
    test::write_bytes(dir.path("w.lave"), write_embeddings(rows));
    const auto r = run_cli({"stats", "--samples", dir.path("w.lave"), "--num-layers", "18", "--out", dir.path("s.lavs")});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto stats = read_stats(test::read_bytes(dir.path("s.lavs")));
    for (double s : stats.std) CHECK(s == static_cast<double>(1e-6f));
  }
  SUBCASE("file output equals the in-memory computation") {
    EmbeddingSequence rows{test::gaussian_matrix(1200, 64, 17), 0.0};
    for (double& v : rows.frames.values()) v = static_cast<float>(v);
    test::write_bytes(dir.path("w.lave"), write_embeddings(rows));
    const auto r = run_cli({"stats", "--samples", dir.path("w.lave"), "--num-layers", "14", "--anchor-seed", "5",
                            "--out", dir.path("s.lavs")});
    REQUIRE(r.code == 0);
    const auto from_file = read_stats(test::read_bytes(dir.path("s.lavs")));
    const auto direct = compute_stats(rows.frames, 14, 5);
    CHECK(write_stats(from_file) == write_stats(direct));
    const double bound = 3.0 / std::sqrt(1200.0);
    for (double m : from_file.mean) CHECK(std::abs(m) < bound);
  }
  SUBCASE("too few samples") {
    test::write_bytes(dir.path("w.lave"), write_embeddings(EmbeddingSequence{Matrix(10, 4, 1.0), 0.0}));
    CHECK(run_cli({"stats", "--samples", dir.path("w.lave"), "--out", dir.path("s.lavs")}).code == cli::kExitFormat);
    CHECK(!fs::exists(dir.path("s.lavs")));
  }
}

TEST_CASE("mock-encode and inspect") {
  test::TempDir dir;
  test::write_bytes(dir.path("one.wav"), encode_wav(test::sine(440.0, 1.0)));
  const auto enc = run_cli({"mock-encode", "--audio", dir.path("one.wav"), "--out", dir.path("e.lave")});
  REQUIRE_MESSAGE(enc.code == 0, enc.err);
  CHECK(nlohmann::json::parse(enc.out)["frames"] == 50);

  const auto info = run_cli({"inspect", dir.path("e.lave")});
  CHECK(info.code == 0);
  CHECK(info.out.find("dim=128") != std::string::npos);
  CHECK(info.out.find("rate=50") != std::string::npos);
  CHECK(info.out.find("frame_count=50") != std::string::npos);

  auto bytes = test::read_bytes(dir.path("e.lave"));
  bytes.resize(bytes.size() - 7);
  test::write_bytes(dir.path("cut.lave"), bytes);
  CHECK(run_cli({"inspect", dir.path("cut.lave")}).code == cli::kExitFormat);
  CHECK(run_cli({"inspect", dir.path("one.wav")}).code == cli::kExitFormat);

  test::write_bytes(dir.path("s.lavs"), write_stats(test::random_stats(2, 2, 1)));
  CHECK(run_cli({"inspect", dir.path("s.lavs")}).out.find("num_layers=2") != std::string::npos);
}
