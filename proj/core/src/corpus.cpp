#include "n2v/corpus.hpp"

#include <fstream>

#include "n2v/error.hpp"

namespace n2v {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

template <typename Fn>
void split_tokens(std::string_view line, Fn&& emit) {
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) emit(line.substr(start, i - start));
  }
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = lower(c);
  return out;
}

Sentence tokenize(std::string_view line, bool lowercase) {
  Sentence out;
  split_tokens(line, [&](std::string_view tok) {
    out.emplace_back(lowercase ? to_lower(tok) : std::string(tok));
  });
  return out;
}

FileCorpus::FileCorpus(std::filesystem::path path, bool lowercase)
    : path_(std::move(path)), lowercase_(lowercase) {
  std::ifstream probe(path_);
  if (!probe) throw IoError("cannot open corpus '" + path_.string() + "'");
}

void FileCorpus::for_each(const Visitor& visit) const {
  std::ifstream in(path_);
  if (!in) throw IoError("cannot open corpus '" + path_.string() + "'");
  std::string line;
  std::vector<std::string_view> tokens;
  while (std::getline(in, line)) {
    if (lowercase_) {
      for (char& c : line) c = lower(c);
    }
    tokens.clear();
    split_tokens(line, [&](std::string_view tok) { tokens.push_back(tok); });
    if (!tokens.empty()) visit(tokens);
  }
  if (in.bad()) throw IoError("read error in corpus '" + path_.string() + "'");
}

void MemoryCorpus::for_each(const Visitor& visit) const {
  std::vector<std::string_view> tokens;
  for (const auto& s : sentences_) {
    if (s.empty()) continue;
    tokens.assign(s.begin(), s.end());
    visit(tokens);
  }
}

}  // namespace n2v
