#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "lav/lav.hpp"

namespace {

lav::AudioBuffer noise(double seconds, int rate = lav::kCanonicalRate) {
  lav::GaussianStream g(11);
  lav::AudioBuffer buf{std::vector<double>(static_cast<std::size_t>(seconds * rate)), rate, 1};
  for (double& s : buf.samples) s = 0.1 * g.next();
  return buf;
}

lav::LatentStats gaussian_stats(std::size_t dim) {
  lav::GaussianStream g(5);
  lav::Matrix samples(600, dim);
  for (double& v : samples.values()) v = g.next();
  return lav::compute_stats(samples, 18, 1);
}

void BM_Stft(benchmark::State& state) {
  const auto audio = noise(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lav::stft_magnitude(audio));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(audio.samples.size()));
}
BENCHMARK(BM_Stft)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Hpss(benchmark::State& state) {
  const auto spec = lav::stft_magnitude(noise(static_cast<double>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(lav::hpss_percussive(spec));
}
BENCHMARK(BM_Hpss)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Resample(benchmark::State& state) {
  const auto audio = noise(5.0, 44100);
  for (auto _ : state) benchmark::DoNotOptimize(lav::resample(audio, lav::kCanonicalRate));
}
BENCHMARK(BM_Resample)->Unit(benchmark::kMillisecond);

void BM_MapPipeline(benchmark::State& state) {
  const auto audio = noise(static_cast<double>(state.range(0)));
  const auto spec = lav::stft_magnitude(audio);
  const auto chroma = lav::chroma(spec);
  const auto onset = lav::onset_envelope(lav::hpss_percussive(spec));
  const auto emb = lav::mock_encode(audio);
  const auto stats = gaussian_stats(512);
  const lav::MapParams params;
  for (auto _ : state) benchmark::DoNotOptimize(lav::map_pipeline(emb, stats, chroma, onset, params));
}
BENCHMARK(BM_MapPipeline)->Arg(2)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Smoothing(benchmark::State& state) {
  lav::StyleTrajectory traj(static_cast<std::size_t>(state.range(0)), 18, 512, 30.0);
  lav::GaussianStream g(3);
  for (double& v : traj.values()) v = g.next();
  const auto groups = lav::default_groups(18);
  for (auto _ : state) benchmark::DoNotOptimize(lav::smooth_hierarchical(traj, groups, {}));
}
BENCHMARK(BM_Smoothing)->Arg(300)->Arg(3000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
