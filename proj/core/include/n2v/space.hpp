#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace n2v {

using WordId = std::uint32_t;

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

using WordSet = std::unordered_set<std::string, StringHash, std::equal_to<>>;

/// Word <-> row id map with corpus frequencies. Ids are dense and assigned
/// in insertion order.
class Vocabulary {
 public:
  struct Entry {
    std::string word;
    std::uint64_t count = 0;
  };

  /// Appends a word; throws DataError if it is already present.
  WordId add(std::string word, std::uint64_t count);

  std::optional<WordId> find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word).has_value(); }
  /// Throws DataError when absent.
  WordId at(std::string_view word) const;

  const std::string& word(WordId id) const { return entries_[id].word; }
  std::uint64_t count(WordId id) const { return entries_[id].count; }
  const std::vector<Entry>& entries() const { return entries_; }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::uint64_t total_tokens() const { return total_tokens_; }

  /// Rekeys an existing row. Throws DataError if old is missing or new exists.
  void rename(std::string_view old_word, std::string new_word);

  /// Removes the most recently added word.
  void pop_back();

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
      if (a.entries_[i].word != b.entries_[i].word || a.entries_[i].count != b.entries_[i].count) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, WordId, StringHash, std::equal_to<>> index_;
  std::uint64_t total_tokens_ = 0;
};

/// Non-owning row-major view of an embedding matrix.
template <typename Real>
struct MatrixView {
  Real* data = nullptr;
  std::size_t rows = 0;
  std::size_t dim = 0;

  std::span<Real> row(std::size_t i) const { return {data + i * dim, dim}; }
};

/// Vocabulary plus input (word) and output (context) embedding matrices.
/// Row i of both matrices belongs to vocabulary word i.
class SemanticSpace {
 public:
  explicit SemanticSpace(std::size_t dim = 0) : dim_(dim) {}
  /// Zero-filled matrices for an existing vocabulary.
  SemanticSpace(Vocabulary vocab, std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vocab_.size(); }
  const Vocabulary& vocab() const { return vocab_; }

  std::span<float> input(WordId id) { return {input_.data() + id * dim_, dim_}; }
  std::span<const float> input(WordId id) const { return {input_.data() + id * dim_, dim_}; }
  std::span<float> output(WordId id) { return {output_.data() + id * dim_, dim_}; }
  std::span<const float> output(WordId id) const { return {output_.data() + id * dim_, dim_}; }

  std::span<float> input_data() { return input_; }
  std::span<const float> input_data() const { return input_; }
  std::span<float> output_data() { return output_; }
  std::span<const float> output_data() const { return output_; }

  MatrixView<float> input_view() { return {input_.data(), size(), dim_}; }
  MatrixView<float> output_view() { return {output_.data(), size(), dim_}; }

  /// Adds a word with the given input row and a zero output row.
  /// Existing rows are untouched. Throws DataError on duplicates and
  /// ValidationError on a dimension mismatch.
  WordId add_word(std::string word, std::span<const float> init, std::uint64_t count);

  /// Rekeys a row; vectors are untouched.
  void relabel(std::string_view old_word, std::string new_word);

  /// Drops the most recently added word and its rows.
  void pop_word();

  /// FNV-1a over the vocabulary and both matrices.
  std::uint64_t checksum() const;

  /// FNV-1a over input and output rows [0, rows).
  std::uint64_t rows_checksum(std::size_t rows) const;

 private:
  Vocabulary vocab_;
  std::size_t dim_ = 0;
  std::vector<float> input_;
  std::vector<float> output_;
};

struct Neighbor {
  std::string word;
  WordId id = 0;
  double similarity = 0.0;
};

struct NeighborList {
  std::vector<Neighbor> items;
};

double dot(std::span<const float> a, std::span<const float> b);
double norm(std::span<const float> a);

/// a.b / (|a||b|), clamped to [-1, 1]; 0 if either norm is 0.
/// Throws ValidationError on dimension mismatch.
double cosine(std::span<const float> a, std::span<const float> b);

/// Top-k rows by cosine to `query`, descending, ties by ascending row id.
/// Throws DataError on an empty vocabulary.
NeighborList nearest_neighbors(const SemanticSpace& space, std::span<const float> query,
                               std::size_t k, const WordSet& exclude = {});

/// 1-based position of `target_word` in the full descending-cosine order
/// over the non-excluded vocabulary.
std::size_t rank_of(const SemanticSpace& space, std::span<const float> query,
                    std::string_view target_word, const WordSet& exclude = {});

}  // namespace n2v
