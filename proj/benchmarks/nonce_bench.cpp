#include <benchmark/benchmark.h>

#include <vector>

#include "n2v/nonce.hpp"
#include "n2v/random.hpp"

namespace {

using namespace n2v;

SemanticSpace random_space(std::size_t words, std::size_t dim) {
  Vocabulary vocab;
  for (std::size_t i = 0; i < words; ++i) vocab.add("w" + std::to_string(i), 1 + 1'000'000 / (i + 1));
  SemanticSpace space(std::move(vocab), dim);
  Rng rng(9);
  for (WordId i = 0; i < words; ++i) {
    for (float& x : space.input(i)) x = static_cast<float>(rng.uniform() - 0.5);
    for (float& x : space.output(i)) x = static_cast<float>(rng.uniform() - 0.5);
  }
  return space;
}

std::vector<Sentence> sentences(std::size_t count, std::size_t words) {
  Rng rng(10);
  std::vector<Sentence> out(count);
  for (auto& s : out) {
    for (int i = 0; i < 25; ++i) s.push_back(i == 12 ? std::string(kSlot) : "w" + std::to_string(rng.below(words)));
  }
  return out;
}

// Learning one nonce from a single definitional sentence, then undoing it.
void BM_LearnNonce(benchmark::State& state) {
  auto space = random_space(50'000, 100);
  const auto input = sentences(static_cast<std::size_t>(state.range(0)), space.size());
  const nonce::NonceConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nonce::learn_nonce(space, input, config));
    space.pop_word();
  }
}
BENCHMARK(BM_LearnNonce)->Arg(1)->Arg(6)->Unit(benchmark::kMicrosecond);

void BM_SumBaseline(benchmark::State& state) {
  const auto space = random_space(50'000, 100);
  const auto input = sentences(6, space.size());
  for (auto _ : state) benchmark::DoNotOptimize(nonce::sum_baseline(space, input, {}));
}
BENCHMARK(BM_SumBaseline)->Unit(benchmark::kMicrosecond);

}  // namespace
