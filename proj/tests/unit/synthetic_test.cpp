#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "n2v/data.hpp"
#include "n2v/error.hpp"
#include "n2v/synthetic.hpp"

namespace n2v::synthetic {
namespace {

const WorldConfig kSmall{4, 3, 20, 6, 1.0, 3};

TEST(World, ShapeAndDistinctWords) {
  const World world(kSmall);
  EXPECT_EQ(world.size(), 240u);
  EXPECT_EQ(world.topics(), 12u);
  std::set<std::string> words;
  for (std::size_t w = 0; w < world.size(); ++w) words.insert(world.word(w));
  for (const auto& f : world.function_words()) words.insert(f);
  EXPECT_EQ(words.size(), world.size() + world.function_words().size());
  EXPECT_EQ(world.topic_of(45), 2u);
  EXPECT_EQ(world.domain_of(45), 0u);
  EXPECT_TRUE(world.is_head(world.head_of_topic(5)));
}

TEST(World, AssociatesAreSymmetricAndWithinTopic) {
  const World world(kSmall);
  for (std::size_t w = 0; w < world.size(); ++w) {
    const auto& assoc = world.associates(w);
    EXPECT_GE(assoc.size(), 2u);
    EXPECT_LE(assoc.size(), 6u);
    for (std::size_t a : assoc) {
      EXPECT_NE(a, w);
      EXPECT_EQ(world.topic_of(a), world.topic_of(w));
      const auto& back = world.associates(a);
      EXPECT_NE(std::find(back.begin(), back.end(), w), back.end());
      EXPECT_EQ(world.relatedness(w, a), 3);
    }
  }
}

TEST(World, RejectsBadShapes) {
  EXPECT_THROW(World({0, 3, 20, 6, 1.0, 1}), ValidationError);
  EXPECT_THROW(World({2, 3, 5, 6, 1.0, 1}), ValidationError);
  const World flat({1, 1, 10, 2, 1.0, 1});
  Rng rng(1);
  EXPECT_THROW(flat.chimera_set(1, 2, rng), ValidationError);
  EXPECT_THROW(flat.similarity_pairs(4, rng), ValidationError);
}

TEST(World, SameSeedSameWorld) {
  const World a(kSmall), b(kSmall);
  for (std::size_t w = 0; w < a.size(); ++w) {
    EXPECT_EQ(a.word(w), b.word(w));
    EXPECT_EQ(a.associates(w), b.associates(w));
  }
}

TEST(World, DefinitionsParseAsDefinitionalData) {
  const World world(kSmall);
  Rng rng(2);
  const auto items = world.definitional_set(50, rng);
  std::set<std::string> targets;
  for (const auto& item : items) {
    targets.insert(item.target);
    EXPECT_EQ(item.sentence[0], "___");
    EXPECT_EQ(std::find(item.sentence.begin(), item.sentence.end(), item.target), item.sentence.end());
  }
  EXPECT_EQ(targets.size(), 50u);
  std::ostringstream out;
  data::write_definitions(out, items);
  std::istringstream in(out.str());
  const auto parsed = data::parse_definitions(in);
  EXPECT_TRUE(parsed.ok()) << data::describe_errors(parsed.errors, "generated");
  EXPECT_EQ(parsed.records, items);
}

TEST(World, ChimerasParseAndHaveSlots) {
  const World world(kSmall);
  Rng rng(3);
  for (std::size_t n : {2, 4, 6}) {
    const auto trials = world.chimera_set(10, n, rng);
    std::ostringstream out;
    data::write_chimeras(out, trials);
    std::istringstream in(out.str());
    const auto parsed = data::parse_chimeras(in, n);
    EXPECT_TRUE(parsed.ok()) << data::describe_errors(parsed.errors, "generated");
    EXPECT_EQ(parsed.records.size(), 10u);
    for (const auto& t : trials) {
      EXPECT_EQ(t.probes.size(), 6u);
      for (double r : t.human_ratings) {
        EXPECT_GE(r, 1.0);
        EXPECT_LT(r, 5.0);
      }
    }
  }
}

TEST(World, SimilarityScoresFollowRelatedness) {
  const World world(kSmall);
  Rng rng(4);
  const auto pairs = world.similarity_pairs(400, rng);
  ASSERT_EQ(pairs.size(), 400u);
  for (std::size_t i = 0; i + 4 <= pairs.size(); i += 4) {
    EXPECT_GT(pairs[i].score, pairs[i + 2].score);
    EXPECT_GT(pairs[i + 2].score, pairs[i + 3].score);
  }
}

TEST(World, CorpusReachesTokenBudget) {
  const World world(kSmall);
  std::ostringstream out;
  const auto written = world.write_corpus(out, 5000, 9);
  EXPECT_GE(written, 5000u);
  std::istringstream in(out.str());
  std::size_t counted = 0;
  std::string tok;
  while (in >> tok) ++counted;
  EXPECT_EQ(counted, written);
  std::ostringstream again;
  world.write_corpus(again, 5000, 9);
  EXPECT_EQ(again.str(), out.str());
}

}  // namespace
}  // namespace n2v::synthetic
