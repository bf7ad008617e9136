// SPDX-License-Identifier: Apache-2.0
//
// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "bloomtree/bloom.hpp"
#include "bloomtree/kernels.hpp"

using namespace bloomtree;

namespace {

Bytes random_bytes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

template <auto Kernel>
void BM_HashChunks(benchmark::State& state) {
  const auto chunks = static_cast<std::size_t>(state.range(0));
  const std::uint32_t chunk_size = 32;
  auto bytes = random_bytes(chunks * chunk_size, 1);
  for (auto _ : state) {
    auto leaves = Kernel(bytes, chunk_size);
    benchmark::DoNotOptimize(leaves.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(chunks));
}

template <auto Kernel>
void BM_HashLevel(benchmark::State& state) {
  const auto nodes = static_cast<std::size_t>(state.range(0));
  auto raw = random_bytes(nodes * 32, 2);
  std::vector<Digest> level(nodes);
  for (std::size_t i = 0; i < nodes; ++i) std::copy_n(raw.begin() + static_cast<std::ptrdiff_t>(i * 32), 32, level[i].begin());
  for (auto _ : state) {
    auto up = Kernel(level);
    benchmark::DoNotOptimize(up.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(nodes / 2));
}

template <auto Kernel>
void BM_CountHits(benchmark::State& state) {
  const auto probes_count = static_cast<std::size_t>(state.range(0));
  auto params = derive_params(10000, 0.01, 32);
  BloomFilter filter(params);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) filter.insert(random_bytes(16, rng()));
  std::vector<Bytes> probes;
  for (std::size_t i = 0; i < probes_count; ++i) probes.push_back(random_bytes(16, rng()));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(filter, probes));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(probes_count));
}

}  // namespace

BENCHMARK(BM_HashChunks<kernels::serial::hash_chunks>)->Name("hash_chunks/serial")->RangeMultiplier(8)->Range(512, 1 << 15);
BENCHMARK(BM_HashChunks<kernels::parallel::hash_chunks>)->Name("hash_chunks/parallel")->RangeMultiplier(8)->Range(512, 1 << 15);
BENCHMARK(BM_HashLevel<kernels::serial::hash_level>)->Name("hash_level/serial")->RangeMultiplier(8)->Range(512, 1 << 15);
BENCHMARK(BM_HashLevel<kernels::parallel::hash_level>)->Name("hash_level/parallel")->RangeMultiplier(8)->Range(512, 1 << 15);
BENCHMARK(BM_CountHits<kernels::serial::count_hits>)->Name("count_hits/serial")->Arg(100000);
BENCHMARK(BM_CountHits<kernels::parallel::count_hits>)->Name("count_hits/parallel")->Arg(100000);

BENCHMARK_MAIN();
