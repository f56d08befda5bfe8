#include <benchmark/benchmark.h>

#include "discwitness/asymptotics.hpp"
#include "discwitness/characterize.hpp"
#include "discwitness/moments.hpp"
#include "discwitness/shapeopt.hpp"

using namespace discwitness;

namespace {

SupportCurve asym() { return build_curve(FourierSpec{1.0, {0.0, 0.05}, {0.0, 0.0, 0.03}}); }

void BM_ChordMoment(benchmark::State& state) {
  const auto curve = asym();
  const auto chart = chord_chart(curve, 0.7);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(moment_chord(chart, n));
}
BENCHMARK(BM_ChordMoment)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_GreenMoment(benchmark::State& state) {
  const auto curve = asym();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(moment_green(curve, n, 0.7));
}
BENCHMARK(BM_GreenMoment)->Arg(10)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_AreaMoment(benchmark::State& state) {
  const auto curve = asym();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(moment_area(curve, n, 0.7));
}
BENCHMARK(BM_AreaMoment)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_BracketMainTerm(benchmark::State& state) {
  const auto chart = chord_chart(asym(), 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(bracket_main_term(chart, 200));
}
BENCHMARK(BM_BracketMainTerm)->Unit(benchmark::kMicrosecond);

void BM_KLProfile(benchmark::State& state) {
  const auto curve = asym();
  for (auto _ : state) benchmark::DoNotOptimize(kl_profile(curve, 1000));
}
BENCHMARK(BM_KLProfile)->Unit(benchmark::kMillisecond);

void BM_InscribedDisc(benchmark::State& state) {
  const auto curve = asym();
  for (auto _ : state) benchmark::DoNotOptimize(inscribed_disc(curve));
}
BENCHMARK(BM_InscribedDisc)->Unit(benchmark::kMillisecond);

void BM_ObjectiveKL(benchmark::State& state) {
  const auto v = ShapeVector::from_spec(FourierSpec{1.0, {0, 0, 0.1}, {}}, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(objective_kl(v));
}
BENCHMARK(BM_ObjectiveKL)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
