#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "n2v/corpus.hpp"
#include "n2v/data.hpp"
#include "n2v/random.hpp"

namespace n2v::synthetic {

/// Shape of a generated language with planted semantics: content words
/// are grouped into topics, topics into domains, and every word has a fixed
/// set of associates it tends to co-occur with. Function words are spread
/// through every sentence.
struct WorldConfig {
  std::size_t domains = 20;
  std::size_t topics_per_domain = 10;
  std::size_t words_per_topic = 60;
  std::size_t associates = 6;
  double zipf_exponent = 1.0;
  std::uint64_t seed = 7;
};

class World {
 public:
  explicit World(const WorldConfig& config);

  const WorldConfig& config() const { return config_; }
  std::size_t size() const { return words_.size(); }
  std::size_t topics() const { return config_.domains * config_.topics_per_domain; }

  const std::string& word(std::size_t w) const { return words_[w]; }
  std::size_t topic_of(std::size_t w) const { return w / config_.words_per_topic; }
  std::size_t domain_of(std::size_t w) const { return topic_of(w) / config_.topics_per_domain; }
  /// The most frequent word of the topic; definitions use it as the genus.
  std::size_t head_of_topic(std::size_t topic) const { return topic * config_.words_per_topic; }
  bool is_head(std::size_t w) const { return w % config_.words_per_topic == 0; }
  const std::vector<std::size_t>& associates(std::size_t w) const { return associates_[w]; }
  const std::vector<std::string>& function_words() const { return function_words_; }

  /// 3 associates, 2 same topic, 1 same domain, 0 unrelated.
  int relatedness(std::size_t a, std::size_t b) const;

  /// A sentence whose focus is a topic-weighted random word.
  Sentence sample_sentence(Rng& rng) const;
  /// A sentence about `focus`: the focus, some of its associates, topic and
  /// domain words, with function words interleaved.
  Sentence sentence_about(std::size_t focus, Rng& rng) const;
  /// Same as sentence_about with the focus replaced by the slot token.
  Sentence slotted_sentence_about(std::size_t focus, Rng& rng) const;
  /// "___ is a <topic head> ..." followed by associates of `w`.
  Sentence definition(std::size_t w, Rng& rng) const;

  /// Definitional instances for `count` distinct non-head words.
  std::vector<data::DefinitionalInstance> definitional_set(std::size_t count, Rng& rng) const;
  /// Chimera-style trials: a nonce mixing two same-domain words, presented
  /// through `num_sentences` sentences about either component, with six
  /// probes rated by planted relatedness plus noise.
  std::vector<data::ChimeraTrial> chimera_set(std::size_t count, std::size_t num_sentences, Rng& rng) const;
  /// Word pairs scored by planted relatedness plus noise.
  std::vector<data::SimilarityPair> similarity_pairs(std::size_t count, Rng& rng) const;

  /// Writes sentences, one per line, until at least `tokens` tokens.
  /// Returns the number of tokens written.
  std::size_t write_corpus(std::ostream& out, std::size_t tokens, std::uint64_t seed) const;

 private:
  std::size_t zipf_in_topic(std::size_t topic, Rng& rng) const;
  const std::string& function_word(Rng& rng) const;
  Sentence weave(std::vector<std::size_t> content, Rng& rng, std::size_t slot_index) const;

  WorldConfig config_;
  std::vector<std::string> words_;
  std::vector<std::vector<std::size_t>> associates_;
  std::vector<std::string> function_words_;
  std::vector<double> zipf_cdf_;
  std::vector<double> function_cdf_;
};

}  // namespace n2v::synthetic
