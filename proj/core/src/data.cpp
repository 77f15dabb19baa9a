#include "n2v/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace n2v::data {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + sep.size();
  }
}

bool parse_real(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size() && std::isfinite(out);
}

std::string format_real(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string join(const Sentence& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

bool has_slot(const Sentence& s) { return std::find(s.begin(), s.end(), kSlot) != s.end(); }

// Calls fn(line_number, content) for every non-blank, non-comment line.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    fn(number, std::string_view(line));
  }
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

Parsed<DefinitionalInstance> parse_definitions(std::istream& in) {
  Parsed<DefinitionalInstance> out;
  for_each_record(in, [&](std::size_t n, std::string_view line) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      out.errors.push_back({n, "expected target<TAB>sentence"});
      return;
    }
    DefinitionalInstance item{to_lower(trim(line.substr(0, tab))), tokenize(line.substr(tab + 1))};
    if (item.target.empty()) {
      out.errors.push_back({n, "empty target"});
    } else if (!has_slot(item.sentence)) {
      out.errors.push_back({n, "sentence for '" + item.target + "' has no slot token"});
    } else if (item.sentence.size() <= kMinDefinitionTokens) {
      out.errors.push_back({n, "sentence for '" + item.target + "' has " + std::to_string(item.sentence.size()) +
                                   " tokens; more than " + std::to_string(kMinDefinitionTokens) + " required"});
    } else {
      out.records.push_back(std::move(item));
    }
  });
  return out;
}

Parsed<DefinitionalInstance> load_definitions(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_definitions(in);
}

Parsed<ChimeraTrial> parse_chimeras(std::istream& in, std::size_t num_sentences) {
  Parsed<ChimeraTrial> out;
  for_each_record(in, [&](std::size_t n, std::string_view line) {
    const auto fields = split(line, "\t");
    if (fields.size() != 4) {
      out.errors.push_back({n, "expected 4 tab-separated fields, found " + std::to_string(fields.size())});
      return;
    }
    ChimeraTrial trial;
    trial.id = std::string(trim(fields[0]));
    auto fail = [&](const std::string& msg) { out.errors.push_back({n, "trial '" + trial.id + "': " + msg}); };

    for (auto part : split(fields[1], "@@")) {
      auto tokens = tokenize(part);
      if (!tokens.empty()) trial.sentences.push_back(std::move(tokens));
    }
    for (auto p : split(fields[2], ",")) trial.probes.push_back(to_lower(trim(p)));
    for (auto r : split(fields[3], ",")) {
      double v = 0.0;
      if (!parse_real(r, v)) return fail("bad rating '" + std::string(trim(r)) + "'");
      trial.human_ratings.push_back(v);
    }

    if (trial.id.empty()) return fail("empty id");
    if (std::any_of(trial.probes.begin(), trial.probes.end(), [](const auto& p) { return p.empty(); })) {
      return fail("empty probe");
    }
    if (trial.probes.size() != trial.human_ratings.size()) {
      return fail(std::to_string(trial.probes.size()) + " probes but " + std::to_string(trial.human_ratings.size()) +
                  " ratings");
    }
    if (num_sentences != 0 && trial.sentences.size() != num_sentences) {
      return fail("has " + std::to_string(trial.sentences.size()) + " sentences, expected " +
                  std::to_string(num_sentences));
    }
    for (std::size_t s = 0; s < trial.sentences.size(); ++s) {
      if (!has_slot(trial.sentences[s])) return fail("sentence " + std::to_string(s + 1) + " has no slot token");
    }
    if (trial.sentences.empty()) return fail("no sentences");
    out.records.push_back(std::move(trial));
  });
  return out;
}

Parsed<ChimeraTrial> load_chimeras(const std::filesystem::path& path, std::size_t num_sentences) {
  auto in = open(path);
  return parse_chimeras(in, num_sentences);
}

Parsed<SimilarityPair> parse_pairs(std::istream& in) {
  Parsed<SimilarityPair> out;
  for_each_record(in, [&](std::size_t n, std::string_view line) {
    const auto tokens = tokenize(line);
    double score = 0.0;
    if (tokens.size() != 3) {
      out.errors.push_back({n, "expected \"word1 word2 score\""});
    } else if (!parse_real(tokens[2], score)) {
      out.errors.push_back({n, "bad score '" + tokens[2] + "'"});
    } else {
      out.records.push_back({tokens[0], tokens[1], score});
    }
  });
  return out;
}

Parsed<SimilarityPair> load_pairs(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_pairs(in);
}

WordSet parse_stopwords(std::istream& in) {
  WordSet out;
  for_each_record(in, [&](std::size_t, std::string_view line) { out.insert(to_lower(trim(line))); });
  return out;
}

WordSet load_stopwords(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_stopwords(in);
}

void write_definitions(std::ostream& out, const std::vector<DefinitionalInstance>& items) {
  for (const auto& item : items) out << item.target << '\t' << join(item.sentence) << '\n';
}

void write_chimeras(std::ostream& out, const std::vector<ChimeraTrial>& trials) {
  for (const auto& t : trials) {
    out << t.id << '\t';
    for (std::size_t s = 0; s < t.sentences.size(); ++s) out << (s ? " @@ " : "") << join(t.sentences[s]);
    out << '\t';
    for (std::size_t p = 0; p < t.probes.size(); ++p) out << (p ? "," : "") << t.probes[p];
    out << '\t';
    for (std::size_t r = 0; r < t.human_ratings.size(); ++r) out << (r ? "," : "") << format_real(t.human_ratings[r]);
    out << '\n';
  }
}

void write_pairs(std::ostream& out, const std::vector<SimilarityPair>& pairs) {
  for (const auto& p : pairs) out << p.word1 << ' ' << p.word2 << ' ' << format_real(p.score) << '\n';
}

std::string describe_errors(const std::vector<ParseError>& errors, const std::string& source) {
  std::string out;
  for (const auto& e : errors) out += source + ":" + std::to_string(e.line) + ": " + e.message + "\n";
  return out;
}

}  // namespace n2v::data
