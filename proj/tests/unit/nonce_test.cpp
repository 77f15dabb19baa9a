#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "n2v/error.hpp"
#include "n2v/nonce.hpp"
#include "n2v/sgns.hpp"
#include "n2v/synthetic.hpp"
#include "test_support.hpp"

namespace n2v::nonce {
namespace {

using testing::random_space;

TEST(DecayedAlpha, Examples) {
  EXPECT_EQ(decayed_alpha(1.0, 1.0 / 70, 0), 1.0);
  EXPECT_NEAR(decayed_alpha(1.0, 1.0 / 70, 70), std::exp(-1.0), 1e-15);
  EXPECT_EQ(decayed_alpha(0.5, 0.0, 1000), 0.5);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(decayed_alpha(2.0, inf, 0), 2.0);
  EXPECT_EQ(decayed_alpha(2.0, inf, 1), 0.0);
}

TEST(WindowSchedule, Examples) {
  EXPECT_EQ(window_schedule(15, 5, 3, 0), 15);
  EXPECT_EQ(window_schedule(15, 5, 3, 2), 5);
  EXPECT_EQ(window_schedule(15, 5, 3, 3), 3);
  EXPECT_EQ(window_schedule(15, 0, 3, 99), 15);
  EXPECT_EQ(window_schedule(15, 5, 3, std::uint64_t{1} << 40), 3);
}

TEST(ThresholdSchedule, DividesByFactorPerSentence) {
  NonceConfig c;
  EXPECT_DOUBLE_EQ(threshold_schedule(c, 0), 10.0);
  EXPECT_DOUBLE_EQ(threshold_schedule(c, 2), 10.0 / (1.9 * 1.9));
  double prev = threshold_schedule(c, 0);
  for (int i = 1; i < 20; ++i) {
    EXPECT_LE(threshold_schedule(c, i), prev);
    prev = threshold_schedule(c, i);
  }
}

TEST(NonceConfig, Validation) {
  NonceConfig c;
  EXPECT_NO_THROW(c.validate());
  c.window_min = 20;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.lambda = -1;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.subsample_factor = 0.5;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.epochs = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  EXPECT_EQ(parse_mode("vanilla"), Mode::vanilla);
  EXPECT_THROW(parse_mode("cbow"), ValidationError);
}

SemanticSpace orthogonal_space() {
  Vocabulary v;
  v.add("alpha", 5);
  v.add("beta", 5);
  v.add("gamma", 5);
  SemanticSpace space(std::move(v), 3);
  space.input(0)[0] = 2;
  space.input(1)[1] = 3;
  space.input(2)[2] = 1;
  return space;
}

TEST(SumInitialize, SingleKnownWordKeepsDirection) {
  const auto space = orthogonal_space();
  Rng rng(1);
  const auto v = sum_initialize(space, {{"unknown", "___", "beta"}}, NonceConfig{}, rng);
  EXPECT_NEAR(cosine(v, space.input(1)), 1.0, 1e-12);
}

TEST(SumInitialize, ExactSumWhenEverythingSurvives) {
  const auto space = orthogonal_space();
  Rng rng(2);
  const auto v = sum_initialize(space, {{"alpha", "___", "beta"}}, NonceConfig{}, rng);
  EXPECT_EQ(v, (std::vector<float>{2, 3, 0}));
}

TEST(SumInitialize, FallsBackWhenNothingSurvives) {
  // A threshold this small discards every word, so the plain sum is used.
  const auto space = orthogonal_space();
  NonceConfig c;
  c.subsample_mult0 = 1e-12;
  Rng rng(3);
  const auto v = sum_initialize(space, {{"alpha", "___", "gamma"}}, c, rng);
  EXPECT_EQ(v, (std::vector<float>{2, 0, 1}));
}

TEST(SumInitialize, RandomVectorForUnknownContext) {
  const auto space = orthogonal_space();
  Rng rng(4);
  const auto v = sum_initialize(space, {{"who", "___", "knows"}}, NonceConfig{}, rng);
  EXPECT_GT(norm(v), 0.0);
  for (float x : v) EXPECT_LT(std::abs(x), 0.5f / 3);
}

TEST(SumBaseline, Examples) {
  const auto space = orthogonal_space();
  const WordSet stop{"alpha", "the"};
  EXPECT_THROW(sum_baseline(space, {{"the", "___", "alpha"}}, stop), DataError);
  EXPECT_EQ(sum_baseline(space, {{"the", "___", "beta", "zzz"}}, stop), (std::vector<float>{0, 3, 0}));
  EXPECT_EQ(sum_baseline(space, {{"alpha", "___"}, {"gamma", "gamma"}}, {}), (std::vector<float>{2, 0, 2}));
}

std::vector<Sentence> random_sentences(const SemanticSpace& space, std::size_t count, Rng& rng) {
  std::vector<Sentence> out;
  for (std::size_t s = 0; s < count; ++s) {
    Sentence sentence;
    const auto len = 8 + rng.below(20);
    const auto slot = rng.below(len);
    for (std::uint64_t i = 0; i < len; ++i) {
      if (i == slot) {
        sentence.emplace_back(kSlot);
      } else if (rng.uniform() < 0.1) {
        sentence.emplace_back("oov" + std::to_string(i));
      } else {
        sentence.push_back(space.vocab().word(static_cast<WordId>(rng.below(space.size()))));
      }
    }
    out.push_back(std::move(sentence));
  }
  return out;
}

TEST(LearnNonce, OnlyTheNonceRowChanges) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto space = random_space(300, 16, rng);
    const auto before = space.checksum();
    const auto sentences = random_sentences(space, 1 + rng.below(6), rng);
    NonceConfig c;
    c.seed = trial;
    const auto learned = learn_nonce(space, sentences, c);
    EXPECT_EQ(space.size(), 301u);
    EXPECT_EQ(learned.row, 300u);
    EXPECT_EQ(space.rows_checksum(300), [&] {
      auto copy = space;
      copy.pop_word();
      return copy.rows_checksum(300);
    }());
    for (float x : space.output(learned.row)) EXPECT_EQ(x, 0.0f);
    space.pop_word();
    EXPECT_EQ(space.checksum(), before);
  }
}

TEST(LearnNonce, DeterministicForFixedSeed) {
  Rng rng(6);
  const auto base = random_space(200, 10, rng);
  const auto sentences = random_sentences(base, 4, rng);
  auto a = base;
  auto b = base;
  EXPECT_EQ(learn_nonce(a, sentences, NonceConfig{}).vector, learn_nonce(b, sentences, NonceConfig{}).vector);
}

TEST(LearnNonce, ErrorsOnMissingSlotOrKnownNonce) {
  Rng rng(7);
  auto space = random_space(50, 4, rng);
  EXPECT_THROW(learn_nonce(space, {{"w1", "w2"}}, NonceConfig{}), DataError);
  EXPECT_THROW(learn_nonce(space, {}, NonceConfig{}), DataError);
  EXPECT_THROW(learn_nonce(space, {{"w1", "w2"}}, NonceConfig{}, Mode::nonce2vec, "w1"), DataError);
  EXPECT_EQ(space.size(), 50u);
}

TEST(LearnNonce, NamedNonceTokenCountsAsSlot) {
  Rng rng(8);
  auto space = random_space(50, 4, rng);
  const auto learned = learn_nonce(space, {{"w1", "valtuor", "w2"}}, NonceConfig{}, Mode::nonce2vec, "valtuor");
  EXPECT_EQ(space.vocab().word(learned.row), "valtuor");
  EXPECT_EQ(learned.trace.pair_alphas.size(), 2u);
}

TEST(LearnNonce, TraceFollowsSchedulesAcrossEpochs) {
  Rng rng(9);
  auto space = random_space(400, 8, rng);
  const auto sentences = random_sentences(space, 3, rng);
  NonceConfig c;
  c.epochs = 2;
  const auto learned = learn_nonce(space, sentences, c);
  ASSERT_EQ(learned.trace.sentence_windows.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(learned.trace.sentence_windows[i], std::max(3, 15 - 5 * static_cast<int>(i)));
    EXPECT_EQ(learned.trace.sentence_thresholds[i], threshold_schedule(c, i));
  }
  for (std::size_t t = 0; t < learned.trace.pair_alphas.size(); ++t) {
    EXPECT_EQ(learned.trace.pair_alphas[t], decayed_alpha(1.0, 1.0 / 70, t));
  }
}

TEST(LearnNonce, InfiniteDecayKeepsTheSumInitialization) {
  Rng rng(10);
  auto space = random_space(300, 12, rng);
  const auto sentences = random_sentences(space, 3, rng);
  NonceConfig c;
  c.lambda = std::numeric_limits<double>::infinity();
  c.alpha0 = 0.01;
  Rng init_rng(c.seed);
  const auto init = sum_initialize(space, sentences, c, init_rng);
  const auto learned = learn_nonce(space, sentences, c);
  EXPECT_GT(cosine(learned.vector, init), 0.999);
  for (std::size_t t = 1; t < learned.trace.pair_alphas.size(); ++t) EXPECT_EQ(learned.trace.pair_alphas[t], 0.0);
}

TEST(LearnNonce, VanillaModeTouchesBackgroundRows) {
  Rng rng(11);
  auto space = random_space(100, 6, rng);
  const auto before = space.rows_checksum(100);
  const auto sentences = random_sentences(space, 2, rng);
  const auto learned = learn_nonce(space, sentences, NonceConfig{}, Mode::vanilla);
  EXPECT_NE(space.rows_checksum(100), before);
  for (float x : learned.vector) EXPECT_TRUE(std::isfinite(x));
  for (int w : learned.trace.sentence_windows) EXPECT_EQ(w, 5);
  ASSERT_FALSE(learned.trace.pair_alphas.empty());
  EXPECT_EQ(learned.trace.pair_alphas.front(), 0.025);
}

TEST(CountSlots, CountsEveryOccurrence) {
  EXPECT_EQ(count_slots({{"___", "a", "___"}, {"b"}, {"___"}}), 3u);
  EXPECT_EQ(count_slots({}), 0u);
}

// A nonce standing in for a known word, trained hard, should land among
// that word's neighbors.
TEST(LearnNonce, RecoversNeighborhoodOfReplacedWord) {
  const synthetic::World world({4, 3, 20, 6, 1.0, 5});
  MemoryCorpus corpus;
  Rng rng(12);
  for (std::size_t tokens = 0; tokens < 400'000;) {
    auto s = world.sample_sentence(rng);
    tokens += s.size();
    corpus.add(std::move(s));
  }
  sgns::TrainConfig tc;
  tc.dim = 24;
  tc.min_count = 5;
  tc.epochs = 3;
  const auto background = sgns::train_background(corpus, tc);

  std::size_t passed = 0;
  const std::size_t trials = 10;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t w = 1 + trial * 7;
    const auto& word = world.word(w);
    ASSERT_TRUE(background.vocab().contains(word));
    auto space = background;
    const auto gold = nearest_neighbors(space, space.input(space.vocab().at(word)), 10, {word});
    NonceConfig c;
    c.alpha0 = 5;
    c.epochs = 50;
    const auto learned = learn_nonce(space, {world.slotted_sentence_about(w, rng)}, c);
    const auto got = nearest_neighbors(space, learned.vector, 10, {word, std::string(kSlot)});
    std::size_t overlap = 0;
    for (const auto& a : gold.items) {
      for (const auto& b : got.items) overlap += a.id == b.id;
    }
    passed += overlap >= 5;
  }
  EXPECT_GE(passed, trials / 2);
}

}  // namespace
}  // namespace n2v::nonce
