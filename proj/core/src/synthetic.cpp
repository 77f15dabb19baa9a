#include "n2v/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_set>

#include "n2v/error.hpp"

namespace n2v::synthetic {
namespace {

constexpr std::size_t kNoSlot = static_cast<std::size_t>(-1);

const std::vector<std::string>& english_function_words() {
  static const std::vector<std::string> words{
      "the", "of",   "and",   "a",    "in",    "to",   "is",   "was",  "it",    "for",  "that",  "with", "as",
      "on",  "by",   "at",    "from", "this",  "be",   "or",   "which", "an",   "are",   "has",  "its",   "were",
      "but", "not",  "also",  "had",  "they",  "their", "have", "one",  "been",  "other", "into", "more", "some",
      "such", "these", "when", "most", "there", "can",  "than", "only", "about", "after", "both"};
  return words;
}

std::size_t draw_cdf(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform() * cdf.back();
  return static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

std::vector<double> zipf_cdf(std::size_t n, double exponent) {
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    acc += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
    cdf[r] = acc;
  }
  return cdf;
}

std::string make_pseudo_word(Rng& rng) {
  static constexpr std::string_view consonants = "bdfgklmnprstvz";
  static constexpr std::string_view vowels = "aeiou";
  const auto syllables = 2 + rng.below(2);
  std::string w;
  for (std::uint64_t s = 0; s < syllables; ++s) {
    w.push_back(consonants[rng.below(consonants.size())]);
    w.push_back(vowels[rng.below(vowels.size())]);
  }
  if (rng.uniform() < 0.5) w.push_back(consonants[rng.below(consonants.size())]);
  return w;
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

World::World(const WorldConfig& config) : config_(config) {
  if (config.domains == 0 || config.topics_per_domain == 0 || config.words_per_topic < 3 || config.associates == 0 ||
      config.associates >= config.words_per_topic) {
    throw ValidationError("invalid synthetic world shape");
  }
  Rng rng(config.seed);
  function_words_ = english_function_words();
  std::unordered_set<std::string> used(function_words_.begin(), function_words_.end());

  const std::size_t n = topics() * config.words_per_topic;
  words_.reserve(n);
  while (words_.size() < n) {
    auto w = make_pseudo_word(rng);
    if (used.insert(w).second) words_.push_back(std::move(w));
  }

  // Symmetric association graph per topic: the union of associates/2
  // random Hamiltonian cycles over the topic's words.
  associates_.resize(n);
  std::vector<std::size_t> order(config.words_per_topic);
  for (std::size_t t = 0; t < topics(); ++t) {
    const std::size_t first = t * config.words_per_topic;
    for (std::size_t c = 0; c < (config.associates + 1) / 2; ++c) {
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = first + i;
      shuffle(order, rng);
      for (std::size_t i = 0; i < order.size(); ++i) {
        const std::size_t a = order[i];
        const std::size_t b = order[(i + 1) % order.size()];
        auto& na = associates_[a];
        if (std::find(na.begin(), na.end(), b) != na.end()) continue;
        na.push_back(b);
        associates_[b].push_back(a);
      }
    }
  }

  zipf_cdf_ = zipf_cdf(config.words_per_topic, config.zipf_exponent);
  function_cdf_ = zipf_cdf(function_words_.size(), 1.0);
}

int World::relatedness(std::size_t a, std::size_t b) const {
  const auto& aa = associates_[a];
  const auto& bb = associates_[b];
  if (std::find(aa.begin(), aa.end(), b) != aa.end() || std::find(bb.begin(), bb.end(), a) != bb.end()) return 3;
  if (topic_of(a) == topic_of(b)) return 2;
  if (domain_of(a) == domain_of(b)) return 1;
  return 0;
}

std::size_t World::zipf_in_topic(std::size_t topic, Rng& rng) const {
  return topic * config_.words_per_topic + draw_cdf(zipf_cdf_, rng);
}

const std::string& World::function_word(Rng& rng) const { return function_words_[draw_cdf(function_cdf_, rng)]; }

Sentence World::weave(std::vector<std::size_t> content, Rng& rng, std::size_t slot_index) const {
  std::vector<std::string> tokens;
  tokens.reserve(content.size());
  for (std::size_t i = 0; i < content.size(); ++i) {
    tokens.push_back(i == slot_index ? std::string(kSlot) : words_[content[i]]);
  }
  shuffle(tokens, rng);
  Sentence out;
  for (auto& tok : tokens) {
    const double u = rng.uniform();
    const int fillers = u < 0.3 ? 0 : (u < 0.75 ? 1 : 2);
    for (int f = 0; f < fillers; ++f) out.push_back(function_word(rng));
    out.push_back(std::move(tok));
  }
  out.emplace_back(".");
  return out;
}

Sentence World::sentence_about(std::size_t focus, Rng& rng) const {
  std::vector<std::size_t> content{focus};
  auto assoc = associates_[focus];
  shuffle(assoc, rng);
  content.insert(content.end(), assoc.begin(), assoc.begin() + std::min<std::size_t>(3, assoc.size()));
  const std::size_t topic = topic_of(focus);
  for (int i = 0; i < 2; ++i) content.push_back(zipf_in_topic(topic, rng));
  if (rng.uniform() < 0.5) {
    const std::size_t d = domain_of(focus);
    const std::size_t other = d * config_.topics_per_domain + rng.below(config_.topics_per_domain);
    content.push_back(zipf_in_topic(other, rng));
  }
  if (rng.uniform() < 0.2) content.push_back(zipf_in_topic(rng.below(topics()), rng));
  return weave(std::move(content), rng, kNoSlot);
}

Sentence World::slotted_sentence_about(std::size_t focus, Rng& rng) const {
  Sentence s = sentence_about(focus, rng);
  for (auto& tok : s) {
    if (tok == words_[focus]) tok = std::string(kSlot);
  }
  return s;
}

Sentence World::sample_sentence(Rng& rng) const { return sentence_about(zipf_in_topic(rng.below(topics()), rng), rng); }

Sentence World::definition(std::size_t w, Rng& rng) const {
  Sentence out{std::string(kSlot), "is", "a", words_[head_of_topic(topic_of(w))]};
  std::vector<std::size_t> content;
  auto assoc = associates_[w];
  shuffle(assoc, rng);
  content.insert(content.end(), assoc.begin(), assoc.begin() + std::min<std::size_t>(4, assoc.size()));
  for (int i = 0; i < 2; ++i) content.push_back(zipf_in_topic(topic_of(w), rng));
  content.erase(std::remove(content.begin(), content.end(), w), content.end());
  out.push_back(function_word(rng));
  for (auto& tok : weave(std::move(content), rng, kNoSlot)) out.push_back(std::move(tok));
  return out;
}

std::vector<data::DefinitionalInstance> World::definitional_set(std::size_t count, Rng& rng) const {
  std::vector<std::size_t> candidates;
  for (std::size_t w = 0; w < size(); ++w) {
    if (!is_head(w)) candidates.push_back(w);
  }
  if (count > candidates.size()) throw ValidationError("definitional set larger than the world");
  shuffle(candidates, rng);
  std::vector<data::DefinitionalInstance> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t w = candidates[i];
    out.push_back({words_[w], definition(w, rng)});
  }
  return out;
}

std::vector<data::ChimeraTrial> World::chimera_set(std::size_t count, std::size_t num_sentences, Rng& rng) const {
  if (config_.topics_per_domain < 2) throw ValidationError("chimeras need at least two topics per domain");
  std::vector<data::ChimeraTrial> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t a = rng.below(size());
    const std::size_t d = domain_of(a);
    std::size_t b = a;
    while (topic_of(b) == topic_of(a)) {
      b = (d * config_.topics_per_domain + rng.below(config_.topics_per_domain)) * config_.words_per_topic +
          rng.below(config_.words_per_topic);
    }
    data::ChimeraTrial trial;
    trial.id = "chimera" + std::to_string(i + 1);
    for (std::size_t s = 0; s < num_sentences; ++s) trial.sentences.push_back(slotted_sentence_about(s % 2 ? b : a, rng));

    std::vector<std::size_t> probes{associates_[a][0], associates_[b][0], zipf_in_topic(topic_of(a), rng),
                                    zipf_in_topic(topic_of(b), rng), rng.below(size()), rng.below(size())};
    for (std::size_t p : probes) {
      const int rel = std::max(relatedness(a, p), relatedness(b, p));
      trial.probes.push_back(words_[p]);
      trial.human_ratings.push_back(1.0 + static_cast<double>(rel) + rng.uniform());
    }
    out.push_back(std::move(trial));
  }
  return out;
}

std::vector<data::SimilarityPair> World::similarity_pairs(std::size_t count, Rng& rng) const {
  if (config_.domains < 2 || config_.topics_per_domain < 2) {
    throw ValidationError("similarity pairs need at least two domains and two topics per domain");
  }
  std::vector<data::SimilarityPair> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t a = rng.below(size());
    std::size_t b = a;
    switch (i % 4) {
      case 0:
        b = associates_[a][rng.below(associates_[a].size())];
        break;
      case 1:
        while (b == a) b = topic_of(a) * config_.words_per_topic + rng.below(config_.words_per_topic);
        break;
      case 2:
        while (topic_of(b) == topic_of(a)) {
          b = domain_of(a) * config_.topics_per_domain * config_.words_per_topic +
              rng.below(config_.topics_per_domain * config_.words_per_topic);
        }
        break;
      default:
        while (domain_of(b) == domain_of(a)) b = rng.below(size());
        break;
    }
    out.push_back({words_[a], words_[b], 10.0 * relatedness(a, b) + 5.0 * rng.uniform()});
  }
  return out;
}

std::size_t World::write_corpus(std::ostream& out, std::size_t tokens, std::uint64_t seed) const {
  Rng rng(seed);
  std::size_t written = 0;
  std::string line;
  while (written < tokens) {
    const Sentence s = sample_sentence(rng);
    line.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) line.push_back(' ');
      line += s[i];
    }
    line.push_back('\n');
    out << line;
    written += s.size();
  }
  return written;
}

}  // namespace n2v::synthetic
