#include <benchmark/benchmark.h>

#include "lkoethe/extractor.hpp"
#include "lkoethe/operators.hpp"
#include "lkoethe/random.hpp"

using namespace lkoethe;

namespace {
KoetheMatrix random_matrix(Rng& rng, std::size_t levels, std::size_t dims) {
  ExplicitGrid grid{levels, dims, std::vector<double>(levels * dims)};
  for (std::size_t n = 0; n < dims; ++n) {
    double acc = rng.uniform(-3, 0);
    for (std::size_t k = 0; k < levels; ++k) {
      grid.log_entries[k * dims + n] = acc;
      acc += rng.uniform(0, 1);
    }
  }
  return KoetheMatrix::build(KoetheMatrixSpec{grid, levels, dims});
}
}  // namespace

static void BM_Oracle(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const auto a = random_matrix(rng, 3, d);
  const auto b = random_matrix(rng, 3, d);
  std::vector<double> theta(d * d);
  for (auto& x : theta) x = rng.uniform(-1, 1);
  const OperatorRep op = DenseOperator(d, d, theta);
  const auto norm = NormSpec::lp(2);
  for (auto _ : state) benchmark::DoNotOptimize(log_opnorm_oracle(op, a, b, norm, 2, 1, 50, 7));
}
BENCHMARK(BM_Oracle)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_ExtractIdentity(benchmark::State& state) {
  const auto a = KoetheMatrix::build(
      KoetheMatrixSpec{PowerSeriesInfinite{AlphaFormula{"ln(n)"}}, 4, 4096});
  const OperatorRep id = QuasiDiagonalOperator::identity(4096);
  const auto norm = NormSpec::lp(1);
  for (auto _ : state) {
    const auto regrade = regrade_wlog(a, id, a, norm, continuity_certificate(id, a, a, norm));
    ExtractOptions options;
    benchmark::DoNotOptimize(extract_quasidiagonal(id, regrade.regraded, a, norm, options));
  }
}
BENCHMARK(BM_ExtractIdentity)->Unit(benchmark::kMillisecond);
