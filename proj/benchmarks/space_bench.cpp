#include <benchmark/benchmark.h>

#include <vector>

#include "n2v/random.hpp"
#include "n2v/space.hpp"

namespace {

using namespace n2v;

SemanticSpace random_space(std::size_t words, std::size_t dim) {
  Vocabulary vocab;
  for (std::size_t i = 0; i < words; ++i) vocab.add("w" + std::to_string(i), words - i);
  SemanticSpace space(std::move(vocab), dim);
  Rng rng(7);
  for (WordId i = 0; i < words; ++i) {
    for (float& x : space.input(i)) x = static_cast<float>(rng.uniform() * 2 - 1);
  }
  return space;
}

std::vector<float> query_for(const SemanticSpace& space) {
  std::vector<float> q(space.dim());
  Rng rng(8);
  for (float& x : q) x = static_cast<float>(rng.uniform() * 2 - 1);
  return q;
}

void BM_NearestNeighbors(benchmark::State& state) {
  const auto space = random_space(static_cast<std::size_t>(state.range(0)), 100);
  const auto q = query_for(space);
  const WordSet exclude{"w0"};
  for (auto _ : state) benchmark::DoNotOptimize(nearest_neighbors(space, q, 10, exclude));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NearestNeighbors)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMicrosecond);

void BM_RankOf(benchmark::State& state) {
  const auto space = random_space(static_cast<std::size_t>(state.range(0)), 100);
  const auto q = query_for(space);
  for (auto _ : state) benchmark::DoNotOptimize(rank_of(space, q, "w5"));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RankOf)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMicrosecond);

}  // namespace
