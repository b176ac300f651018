#include <benchmark/benchmark.h>

#include "radxray/continuation.hpp"
#include "radxray/moments.hpp"

using namespace radxray;

static void BM_ChordLength(benchmark::State& state) {
  const AlgebraicBody k = make_superellipse_body();
  const Direction d = Direction::from_angle(0.3);
  const SupportData sd = support(k, d);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chord_length(k, d, t, sd));
    t = t > 0.9 ? -0.9 : t + 0.01;
  }
}
BENCHMARK(BM_ChordLength);

static void BM_Support(benchmark::State& state) {
  const AlgebraicBody k = make_superellipse_body();
  double th = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(support(k, Direction::from_angle(th)));
    th += 0.1;
  }
}
BENCHMARK(BM_Support);

static void BM_SampleChords(benchmark::State& state) {
  const AlgebraicBody k = make_ellipse_body(2.0, 1.0, {0.3, -0.2}, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(sample_chords(k, Direction::from_angle(0.7), state.range(0)));
}
BENCHMARK(BM_SampleChords)->Arg(64)->Arg(256);

static void BM_Moments(benchmark::State& state) {
  const AlgebraicBody k = make_superellipse_body();
  const auto thetas = direction_grid(64);
  for (auto _ : state) benchmark::DoNotOptimize(compute_moments(k, 4, thetas));
}
BENCHMARK(BM_Moments)->Unit(benchmark::kMillisecond);

static void BM_Track(benchmark::State& state) {
  const AlgebraicBody k = make_ellipse_body(2.0, 1.0);
  const DiscriminantSet ds = discriminant_set(k, Direction::from_angle(1.0));
  const ComplexPath path = build_path(ds, 0.0, default_path_radius(ds), 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(track_branches(ds, k, 0.0, path));
}
BENCHMARK(BM_Track)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
