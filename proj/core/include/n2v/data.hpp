#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "n2v/corpus.hpp"
#include "n2v/error.hpp"
#include "n2v/random.hpp"
#include "n2v/space.hpp"

namespace n2v::data {

/// Minimum definitional sentence length (tokens must exceed this).
inline constexpr std::size_t kMinDefinitionTokens = 10;

struct DefinitionalInstance {
  std::string target;
  Sentence sentence;

  friend bool operator==(const DefinitionalInstance&, const DefinitionalInstance&) = default;
};

struct ChimeraTrial {
  std::string id;
  std::vector<Sentence> sentences;
  std::vector<std::string> probes;
  std::vector<double> human_ratings;

  friend bool operator==(const ChimeraTrial&, const ChimeraTrial&) = default;
};

struct SimilarityPair {
  std::string word1;
  std::string word2;
  double score = 0.0;

  friend bool operator==(const SimilarityPair&, const SimilarityPair&) = default;
};

struct ParseError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

/// Every non-blank, non-comment line yields either a record or an error.
template <typename T>
struct Parsed {
  std::vector<T> records;
  std::vector<ParseError> errors;

  bool ok() const { return errors.empty(); }
};

/// target<TAB>slotted sentence. Lowercased. Sentences must contain the slot
/// and be longer than kMinDefinitionTokens tokens.
Parsed<DefinitionalInstance> parse_definitions(std::istream& in);
Parsed<DefinitionalInstance> load_definitions(const std::filesystem::path& path);

/// id<TAB>sentences joined by "@@"<TAB>probes (comma)<TAB>ratings (comma).
/// Every sentence must contain the slot; the trial must have exactly
/// `num_sentences` sentences (0 accepts any count).
Parsed<ChimeraTrial> parse_chimeras(std::istream& in, std::size_t num_sentences);
Parsed<ChimeraTrial> load_chimeras(const std::filesystem::path& path, std::size_t num_sentences);

/// "w1 w2 score" per line (spaces or tabs).
Parsed<SimilarityPair> parse_pairs(std::istream& in);
Parsed<SimilarityPair> load_pairs(const std::filesystem::path& path);

/// One token per line; set semantics.
WordSet parse_stopwords(std::istream& in);
WordSet load_stopwords(const std::filesystem::path& path);

void write_definitions(std::ostream& out, const std::vector<DefinitionalInstance>& items);
void write_chimeras(std::ostream& out, const std::vector<ChimeraTrial>& trials);
void write_pairs(std::ostream& out, const std::vector<SimilarityPair>& pairs);

/// Seeded Fisher-Yates shuffle, then the first `train_size` items go to the
/// training split. Throws ValidationError if train_size > items.size().
template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_train_test(std::vector<T> items, std::size_t train_size,
                                                           std::uint64_t seed);

/// Formats a parse error list as "path:line: message" lines.
std::string describe_errors(const std::vector<ParseError>& errors, const std::string& source);

template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_train_test(std::vector<T> items, std::size_t train_size,
                                                           std::uint64_t seed) {
  if (train_size > items.size()) {
    throw ValidationError("train split of " + std::to_string(train_size) + " exceeds " +
                          std::to_string(items.size()) + " items");
  }
  Rng rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.below(i)]);
  }
  std::vector<T> test(std::make_move_iterator(items.begin() + static_cast<std::ptrdiff_t>(train_size)),
                      std::make_move_iterator(items.end()));
  items.resize(train_size);
  return {std::move(items), std::move(test)};
}

}  // namespace n2v::data
