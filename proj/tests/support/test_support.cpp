#include "test_support.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace n2v::testing {

SemanticSpace random_space(std::size_t words, std::size_t dim, Rng& rng, bool with_output) {
  Vocabulary vocab;
  for (std::size_t i = 0; i < words; ++i) vocab.add("w" + std::to_string(i), 1 + 100000 / (i + 1));
  SemanticSpace space(std::move(vocab), dim);
  for (WordId id = 0; id < space.size(); ++id) {
    for (auto& x : space.input(id)) x = static_cast<float>(2.0 * rng.uniform() - 1.0);
    if (with_output) {
      for (auto& x : space.output(id)) x = static_cast<float>(2.0 * rng.uniform() - 1.0);
    }
  }
  return space;
}

std::vector<float> random_vector(std::size_t dim, Rng& rng, double scale) {
  std::vector<float> v(dim);
  for (auto& x : v) x = static_cast<float>(scale * (2.0 * rng.uniform() - 1.0));
  return v;
}

double oracle_cosine(std::span<const float> a, std::span<const float> b) {
  long double ab = 0;
  long double aa = 0;
  long double bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += static_cast<long double>(a[i]) * b[i];
    aa += static_cast<long double>(a[i]) * a[i];
    bb += static_cast<long double>(b[i]) * b[i];
  }
  if (aa == 0 || bb == 0) return 0.0;
  return static_cast<double>(ab / std::sqrt(aa * bb));
}

std::vector<WordId> oracle_order(const SemanticSpace& space, std::span<const float> query, const WordSet& exclude) {
  std::vector<std::pair<double, WordId>> scored;
  for (WordId id = 0; id < space.size(); ++id) {
    if (exclude.contains(space.vocab().word(id))) continue;
    scored.emplace_back(oracle_cosine(query, space.input(id)), id);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<WordId> ids;
  for (const auto& [s, id] : scored) ids.push_back(id);
  return ids;
}

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "n2v-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed: " + command);
  std::array<char, 4096> buf;
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) result.output.append(buf.data(), n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace n2v::testing
