#include <benchmark/benchmark.h>

#include <vector>

#include "lkoethe/conditions.hpp"

using namespace lkoethe;

namespace {
KoetheMatrix power_series(std::size_t levels, std::size_t dims) {
  return KoetheMatrix::build(
      KoetheMatrixSpec{PowerSeriesInfinite{AlphaFormula{"ln(n)"}}, levels, dims});
}
}  // namespace

static void BM_MinimalCLadder(benchmark::State& state) {
  const auto t = static_cast<std::size_t>(state.range(0));
  const auto a = power_series(5, t);
  const auto schedule = Schedule::parse("k+1");
  const std::vector<std::size_t> ladder{t / 16, t / 4, t};
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_minimal_c_thm2_ladder(a, a, schedule, 2, 2, 2, ladder));
  }
}
BENCHMARK(BM_MinimalCLadder)->Arg(256)->Arg(1024);

static void BM_CheckBoundedPair(benchmark::State& state) {
  const auto a = power_series(5, 1000);
  const std::vector<Schedule> schedules{Schedule::parse("k+1"), Schedule::parse("2k")};
  Budget budget;
  budget.ladder = {10, 100, 1000};
  budget.max_k0 = 2;
  for (auto _ : state) benchmark::DoNotOptimize(check_bounded_pair(a, a, schedules, budget));
}
BENCHMARK(BM_CheckBoundedPair)->Unit(benchmark::kMillisecond);
