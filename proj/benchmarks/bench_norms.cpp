#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "lkoethe/koethe.hpp"
#include "lkoethe/random.hpp"
#include "lkoethe/seqnorm.hpp"

using namespace lkoethe;

static void BM_Seminorm(benchmark::State& state) {
  const auto dims = static_cast<std::size_t>(state.range(0));
  const auto a = KoetheMatrix::build(
      KoetheMatrixSpec{PowerSeriesInfinite{AlphaFormula{"ln(n)"}}, 4, dims});
  Rng rng(1);
  std::vector<double> x(dims);
  for (auto& v : x) v = rng.uniform(-1, 1);
  const GradedVector gx(x);
  const auto norm = NormSpec::lp(2);
  for (auto _ : state) benchmark::DoNotOptimize(log_seminorm(a, norm, gx, 3));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(dims));
}
BENCHMARK(BM_Seminorm)->Arg(64)->Arg(1024)->Arg(16384);

static void BM_Monotonize(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto base = CustomNorm::create(
      "skew",
      [](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t n = 0; n < x.size(); ++n) {
          s += std::fabs(x[n] - 0.5 * x[(n + 1) % x.size()]);
        }
        return s;
      },
      16);
  Rng rng(2);
  std::vector<double> x(d);
  for (auto& v : x) v = rng.uniform(-1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(monotonize(base, x));
}
BENCHMARK(BM_Monotonize)->DenseRange(4, 16, 4);
