#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "csk/datasets.hpp"
#include "csk/hashing.hpp"
#include "csk/sketch.hpp"
#include "csk/sparse_vector.hpp"

namespace {

csk::SketchParams params_for(uint32_t t, uint32_t s) {
  csk::SketchParams p;
  p.t = t;
  p.s = s;
  p.master_seed = 42;
  return p;
}

void BM_BucketHash(benchmark::State& state) {
  const csk::BucketHash h(12345, 1024);
  uint64_t key = 0;
  uint64_t acc = 0;
  for (auto _ : state) {
    acc += h(key++);
  }
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BucketHash);

void BM_SignHashPairwise(benchmark::State& state) {
  const csk::SignHashPairwise g(12345);
  uint64_t key = 0;
  int64_t acc = 0;
  for (auto _ : state) {
    acc += g(key++);
  }
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SignHashPairwise);

void BM_SignHashFourwise(benchmark::State& state) {
  const csk::SignHashFourwise g(12345);
  uint64_t key = 0;
  int64_t acc = 0;
  for (auto _ : state) {
    acc += g(key++);
  }
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SignHashFourwise);

// Turnstile update throughput across table shapes.
void BM_Update(benchmark::State& state) {
  csk::CountSketch sk(
      params_for((uint32_t)state.range(0), (uint32_t)state.range(1)));
  uint64_t key = 0;
  for (auto _ : state) {
    sk.update(key++, 1.0);
  }
  benchmark::DoNotOptimize(sk.table().data());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Update)->Args({1, 1024})->Args({2, 1024})->Args({3, 1024})
    ->Args({2, 65536});

void BM_PointQuery(benchmark::State& state) {
  csk::CountSketch sk(
      params_for((uint32_t)state.range(0), (uint32_t)state.range(1)));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) sk.update(rng(), 1.0);
  uint64_t key = 0;
  double acc = 0.0;
  for (auto _ : state) {
    acc += sk.point_query(key++);
  }
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PointQuery)->Args({1, 1024})->Args({2, 1024})->Args({3, 1024});

void BM_InnerProduct(benchmark::State& state) {
  const csk::SketchParams p =
      params_for((uint32_t)state.range(0), (uint32_t)state.range(1));
  const auto [v, w] = csk::disjoint_pair(256);
  const csk::CountSketch a = csk::CountSketch::from_vector(v, p);
  const csk::CountSketch b = csk::CountSketch::from_vector(w, p);
  double acc = 0.0;
  for (auto _ : state) {
    acc += csk::inner_product(a, b);
  }
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations() * (uint64_t)p.rows() * p.s);
}
BENCHMARK(BM_InnerProduct)->Args({2, 1024})->Args({2, 16384});

void BM_FromVectorZipf(benchmark::State& state) {
  const csk::SparseVector v = csk::zipf_vector(1000, 1.2);
  const csk::SketchParams p = params_for(2, 1024);
  for (auto _ : state) {
    benchmark::DoNotOptimize(csk::CountSketch::from_vector(v, p));
  }
  state.SetItemsProcessed(state.iterations() * v.nnz());
}
BENCHMARK(BM_FromVectorZipf);

void BM_Reseed(benchmark::State& state) {
  csk::CountSketch sk(params_for((uint32_t)state.range(0), 1024));
  uint64_t seed = 0;
  for (auto _ : state) {
    sk.reseed(seed++);
  }
  benchmark::DoNotOptimize(sk.table().data());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Reseed)->Arg(1)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
