#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace n2v {

/// Placeholder substituted for the unknown word in evaluation sentences.
inline constexpr std::string_view kSlot = "___";

using Sentence = std::vector<std::string>;

/// ASCII lowercasing; bytes >= 0x80 pass through unchanged.
std::string to_lower(std::string_view s);

/// Splits on runs of spaces/tabs; optionally lowercases. The slot token is
/// preserved as is.
Sentence tokenize(std::string_view line, bool lowercase = true);

/// Re-iterable stream of pre-tokenized sentences.
class SentenceSource {
 public:
  using Visitor = std::function<void(std::span<const std::string_view>)>;

  virtual ~SentenceSource() = default;
  /// Calls `visit` once per sentence, in order. Token views are valid only
  /// for the duration of the call.
  virtual void for_each(const Visitor& visit) const = 0;
};

/// UTF-8 text, one sentence per line, tokens separated by spaces.
class FileCorpus final : public SentenceSource {
 public:
  explicit FileCorpus(std::filesystem::path path, bool lowercase = true);
  void for_each(const Visitor& visit) const override;

 private:
  std::filesystem::path path_;
  bool lowercase_;
};

class MemoryCorpus final : public SentenceSource {
 public:
  MemoryCorpus() = default;
  explicit MemoryCorpus(std::vector<Sentence> sentences) : sentences_(std::move(sentences)) {}

  void add(Sentence s) { sentences_.push_back(std::move(s)); }
  const std::vector<Sentence>& sentences() const { return sentences_; }
  void for_each(const Visitor& visit) const override;

 private:
  std::vector<Sentence> sentences_;
};

}  // namespace n2v
