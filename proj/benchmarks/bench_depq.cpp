#include <benchmark/benchmark.h>

#include <numeric>

#include "depq/depq.hpp"
#include "random_tables.hpp"

namespace {

using depq::testing::random_table;

depq::Table wide_table(std::size_t rows, std::size_t columns, std::size_t categories) {
  return random_table(99, {.min_rows = rows, .max_rows = rows, .min_columns = columns, .max_columns = columns,
                           .max_categories = categories});
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

void BM_QMatrix(benchmark::State& state) {
  const auto t = wide_table(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 12);
  const auto cols = iota(t.n_columns());
  for (auto _ : state) benchmark::DoNotOptimize(depq::q_matrix(t, cols, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cols.size() * (cols.size() - 1)));
}
BENCHMARK(BM_QMatrix)->Args({1'000, 10})->Args({10'000, 10})->Args({10'000, 30})->Unit(benchmark::kMillisecond);

void BM_DiscoverFds(benchmark::State& state) {
  const auto t = wide_table(5'000, static_cast<std::size_t>(state.range(0)), 6);
  const auto cols = iota(t.n_columns());
  const auto max_lhs = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(depq::discover_fds(t, cols, max_lhs));
}
BENCHMARK(BM_DiscoverFds)->Args({8, 2})->Args({8, 3})->Args({12, 3})->Unit(benchmark::kMillisecond);

void BM_Preservation(benchmark::State& state) {
  const auto real = wide_table(static_cast<std::size_t>(state.range(0)), 8, 6);
  const auto synth = depq::generate(real, {depq::BaselineMethod::IndependentColumns, 1, real.n_rows(), 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(depq::ld_preservation(real, synth));
}
BENCHMARK(BM_Preservation)->Arg(1'000)->Arg(10'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
