#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "emc/absolute.hpp"
#include "emc/equipment.hpp"
#include "emc/graded_graph.hpp"
#include "emc/markov_measure.hpp"
#include "emc/rsk.hpp"

using namespace emc;

namespace {

void bm_pascal_path_count(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  auto g = pascal_graph(depth + 1);
  for (auto _ : state) {
    auto c = path_count(*g, {0, 0}, {depth, depth / 2});
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(bm_pascal_path_count)->Arg(500)->Arg(1000)->Arg(2000);

void bm_backward_central(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  auto g = pascal_graph(depth + 1);
  auto central = central_equipment(g);
  for (auto _ : state) {
    auto d = backward_distribution(*central, {depth, depth / 2}, depth / 2);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(bm_backward_central)->Arg(200)->Arg(400)->Arg(800);

void bm_backward_generic(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  auto g = pascal_graph(depth + 1);
  auto table = from_table(g, materialize(*central_equipment(g)));
  for (auto _ : state) {
    auto d = backward_distribution(*table, {depth, depth / 2}, depth / 2);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(bm_backward_generic)->Arg(50)->Arg(100)->Arg(200);

void bm_martin_kernel(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  auto g = pascal_graph(depth + 1);
  auto central = central_equipment(g);
  auto prefix = path_from_labels(*g, 0, {"0,0", "1,1", "2,1", "3,2"});
  for (auto _ : state) {
    auto k = martin_kernel(*central, prefix, {depth, depth / 3});
    benchmark::DoNotOptimize(k);
  }
}
BENCHMARK(bm_martin_kernel)->Arg(1000)->Arg(3000)->Arg(5000);

void bm_rsk_insert(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<int> word(static_cast<std::size_t>(n));
  std::uint64_t x = 88172645463325252ull;
  for (auto& letter : word) {
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    letter = static_cast<int>(x % 50) + 1;
  }
  for (auto _ : state) {
    auto pair = rsk_pair(word);
    benchmark::DoNotOptimize(pair);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_rsk_insert)->Arg(1000)->Arg(10000);

void bm_sample_bernoulli(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  auto g = pascal_graph(depth + 1);
  auto m = bernoulli_on_pascal(g, Rational(1, 3));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto p = sample_path(*m, depth, seed++);
    benchmark::DoNotOptimize(p);
  }
  state.SetItemsProcessed(state.iterations() * depth);
}
BENCHMARK(bm_sample_bernoulli)->Arg(100)->Arg(1000);

void bm_pushforward_sample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  LetterDistribution dist({Rational(3, 5), Rational(2, 5)});
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto path = pushforward_sample(dist, n, seed++);
    benchmark::DoNotOptimize(path);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_pushforward_sample)->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
