#include <map>

#include <benchmark/benchmark.h>

#include "rngaudit/rngaudit.hpp"

using namespace rngaudit;

namespace {

const BitStream& stream(std::uint64_t n) {
  static std::map<std::uint64_t, BitStream> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, fair_bits(n, 1)).first;
  return it->second;
}

void bits_processed(benchmark::State& state, std::uint64_t n) {
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void BM_Balance(benchmark::State& state) {
  const auto& s = stream(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(balance(s));
  bits_processed(state, s.size());
}

void BM_TupleCounts(benchmark::State& state) {
  const auto& s = stream(state.range(0));
  const auto mode = static_cast<TupleMode>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(tuple_counts(s, mode));
  bits_processed(state, s.size());
}

void BM_Autocorrelation(benchmark::State& state) {
  const auto& s = stream(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(autocorrelation(s, 100));
  bits_processed(state, s.size());
}

void BM_WaitingTimes(benchmark::State& state) {
  const auto& s = stream(state.range(0));
  const auto p = Pattern::parse("00");
  for (auto _ : state) benchmark::DoNotOptimize(waiting_times_empirical(s, p));
  bits_processed(state, s.size());
}

void BM_FellerScan(benchmark::State& state) {
  const auto& s = stream(state.range(0));
  const auto threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(scan_no_run_windows(s, 400, 2, 15, RunMode::ones_only, threads));
  bits_processed(state, s.size());
}

void BM_BlockwiseEntropy(benchmark::State& state) {
  const auto& s = stream(10'000'000);
  const std::uint64_t sizes[] = {static_cast<std::uint64_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(blockwise_entropy(s, sizes));
  bits_processed(state, s.size());
}

void BM_CountNoRun(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(count_no_run(static_cast<std::uint64_t>(state.range(0)), 4));
}

void BM_AlphaIdeal(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(alpha_ideal(static_cast<unsigned>(state.range(0))));
}

}  // namespace

BENCHMARK(BM_Balance)->Arg(1'000'000)->Arg(10'000'000);
BENCHMARK(BM_TupleCounts)
    ->Args({10'000'000, static_cast<int>(TupleMode::overlapping)})
    ->Args({10'000'000, static_cast<int>(TupleMode::disjoint)});
BENCHMARK(BM_Autocorrelation)->Arg(1'000'000)->Arg(10'000'000);
BENCHMARK(BM_WaitingTimes)->Arg(10'000'000);
BENCHMARK(BM_FellerScan)->Args({10'000'000, 1})->Args({10'000'000, 4})->UseRealTime();
BENCHMARK(BM_BlockwiseEntropy)->Arg(100)->Arg(10'000)->Arg(1'000'000);
BENCHMARK(BM_CountNoRun)->Arg(400)->Arg(4000);
BENCHMARK(BM_AlphaIdeal)->Arg(4)->Arg(15);
BENCHMARK_MAIN();
