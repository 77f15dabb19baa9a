#include <benchmark/benchmark.h>

#include <vector>

#include "n2v/sgns.hpp"
#include "n2v/synthetic.hpp"

namespace {

using namespace n2v;

void BM_SgdStep(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const std::size_t rows = 1000;
  Rng rng(1);
  std::vector<float> in(rows * dim), out(rows * dim);
  for (auto& x : in) x = static_cast<float>(rng.uniform() - 0.5) / static_cast<float>(dim);
  for (auto& x : out) x = static_cast<float>(rng.uniform() - 0.5) / static_cast<float>(dim);
  const std::vector<WordId> negatives{3, 17, 250, 600, 999};
  WordId target = 0;
  for (auto _ : state) {
    const double loss = sgns::sgd_step<float>({in.data(), rows, dim}, {out.data(), rows, dim}, target, 42,
                                              negatives, 0.025, false, false);
    benchmark::DoNotOptimize(loss);
    target = (target + 1) % rows;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SgdStep)->Arg(100)->Arg(400);

void BM_NoiseDraw(benchmark::State& state) {
  Vocabulary vocab;
  for (int i = 0; i < state.range(0); ++i) vocab.add("w" + std::to_string(i), 1 + 1'000'000 / (i + 1));
  const sgns::NoiseTable table(vocab);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(table.draw(rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NoiseDraw)->Arg(10'000)->Arg(1'000'000);

// One epoch over a small synthetic corpus; reports words per second.
void BM_TrainBackground(benchmark::State& state) {
  const synthetic::World world({4, 5, 40, 6, 1.0, 1});
  MemoryCorpus corpus;
  Rng rng(3);
  std::size_t tokens = 0;
  while (tokens < 200'000) {
    auto s = world.sample_sentence(rng);
    tokens += s.size();
    corpus.add(std::move(s));
  }
  sgns::TrainConfig config;
  config.dim = static_cast<std::size_t>(state.range(0));
  config.min_count = 5;
  config.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sgns::train_background(corpus, config));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tokens));
}
BENCHMARK(BM_TrainBackground)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
