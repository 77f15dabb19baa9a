#include "n2v/space_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "n2v/error.hpp"

namespace n2v {
namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

std::string record_label(std::size_t record) { return "record " + std::to_string(record + 1); }

void append_float(std::string& out, float v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
  }
  return v;
}

std::pair<std::size_t, std::size_t> read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("malformed header: file is empty");
  std::istringstream hs(line);
  long long rows = -1;
  long long dim = -1;
  std::string extra;
  if (!(hs >> rows >> dim) || (hs >> extra) || rows < 0 || dim <= 0) {
    throw DataError("malformed header '" + line + "': expected \"<rows> <dim>\"");
  }
  return {static_cast<std::size_t>(rows), static_cast<std::size_t>(dim)};
}

void check_unique(WordSet& seen, const std::string& word, std::size_t record) {
  if (!seen.insert(word).second) {
    throw DataError("duplicate token '" + word + "' at " + record_label(record));
  }
}

VectorTable read_text(std::istream& in, std::size_t rows, std::size_t dim) {
  VectorTable t;
  t.dim = dim;
  t.words.reserve(rows);
  t.values.reserve(rows * dim);
  WordSet seen;
  std::string line;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) {
      throw DataError("truncated file: " + record_label(r) + " missing (header declares " +
                      std::to_string(rows) + " records)");
    }
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end && *p == ' ') ++p;
    const char* tok_end = p;
    while (tok_end < end && *tok_end != ' ') ++tok_end;
    if (tok_end == p) throw DataError("empty token at " + record_label(r));
    std::string word(p, tok_end);
    p = tok_end;
    for (std::size_t c = 0; c < dim; ++c) {
      while (p < end && *p == ' ') ++p;
      float v = 0.0f;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{}) {
        throw DataError("truncated or malformed " + record_label(r) + " ('" + word + "'): component " +
                        std::to_string(c + 1) + " of " + std::to_string(dim));
      }
      t.values.push_back(v);
      p = next;
    }
    while (p < end && (*p == ' ' || *p == '\r')) ++p;
    if (p != end) {
      throw DataError(record_label(r) + " ('" + word + "') has more than " + std::to_string(dim) +
                      " components");
    }
    check_unique(seen, word, r);
    t.words.push_back(std::move(word));
  }
  return t;
}

VectorTable read_binary(std::istream& in, std::size_t rows, std::size_t dim) {
  VectorTable t;
  t.dim = dim;
  t.words.reserve(rows);
  t.values.resize(rows * dim);
  WordSet seen;
  std::vector<std::uint32_t> raw(dim);
  for (std::size_t r = 0; r < rows; ++r) {
    std::string word;
    int ch = in.get();
    // word2vec.c writes a newline after each vector; accept it.
    while (ch == '\n') ch = in.get();
    while (ch != EOF && ch != ' ') {
      word.push_back(static_cast<char>(ch));
      ch = in.get();
    }
    if (ch == EOF) {
      throw DataError("truncated file: " + record_label(r) + " missing or cut short (header declares " +
                      std::to_string(rows) + " records)");
    }
    if (word.empty()) throw DataError("empty token at " + record_label(r));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(dim * 4));
    if (static_cast<std::size_t>(in.gcount()) != dim * 4) {
      throw DataError("truncated " + record_label(r) + " ('" + word + "'): expected " +
                      std::to_string(dim) + " floats");
    }
    for (std::size_t c = 0; c < dim; ++c) {
      t.values[r * dim + c] = std::bit_cast<float>(to_little_endian(raw[c]));
    }
    check_unique(seen, word, r);
    t.words.push_back(std::move(word));
  }
  return t;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::filesystem::path with_suffix(const std::filesystem::path& p, const char* suffix) {
  auto s = p;
  s += suffix;
  return s;
}

VectorTable load_table(const std::filesystem::path& path, VectorFormat format) {
  auto in = open_in(path, format == VectorFormat::binary);
  try {
    return read_vectors(in, format);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace

VectorFormat parse_vector_format(std::string_view name) {
  if (name == "text") return VectorFormat::text;
  if (name == "binary") return VectorFormat::binary;
  throw ValidationError("unknown vector format '" + std::string(name) + "' (expected text or binary)");
}

std::string format_vector_record(std::string_view token, std::span<const float> values) {
  std::string line(token);
  for (float v : values) {
    line.push_back(' ');
    append_float(line, v);
  }
  return line;
}

void write_vectors(std::ostream& out, const VectorTable& table, VectorFormat format) {
  out << table.words.size() << ' ' << table.dim << '\n';
  std::vector<std::uint32_t> raw(table.dim);
  for (std::size_t r = 0; r < table.words.size(); ++r) {
    std::span<const float> row(table.values.data() + r * table.dim, table.dim);
    if (format == VectorFormat::text) {
      out << format_vector_record(table.words[r], row) << '\n';
    } else {
      out << table.words[r] << ' ';
      for (std::size_t c = 0; c < table.dim; ++c) raw[c] = to_little_endian(std::bit_cast<std::uint32_t>(row[c]));
      out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(table.dim * 4));
    }
  }
}

VectorTable read_vectors(std::istream& in, VectorFormat format) {
  auto [rows, dim] = read_header(in);
  return format == VectorFormat::text ? read_text(in, rows, dim) : read_binary(in, rows, dim);
}

void save_space(const SemanticSpace& space, const std::filesystem::path& path, VectorFormat format) {
  const auto& vocab = space.vocab();
  VectorTable table;
  table.dim = space.dim();
  table.words.reserve(vocab.size());
  for (const auto& e : vocab.entries()) table.words.push_back(e.word);

  const bool binary = format == VectorFormat::binary;
  {
    auto in_data = space.input_data();
    table.values.assign(in_data.begin(), in_data.end());
    auto out = open_out(path, binary);
    write_vectors(out, table, format);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
  }
  {
    auto out_data = space.output_data();
    table.values.assign(out_data.begin(), out_data.end());
    const auto out_path = with_suffix(path, ".out");
    auto out = open_out(out_path, binary);
    write_vectors(out, table, format);
    if (!out) throw IoError("write failed for '" + out_path.string() + "'");
  }
  {
    const auto vocab_path = with_suffix(path, ".vocab");
    auto out = open_out(vocab_path, false);
    for (const auto& e : vocab.entries()) out << e.word << '\t' << e.count << '\n';
    if (!out) throw IoError("write failed for '" + vocab_path.string() + "'");
  }
}

SemanticSpace load_space(const std::filesystem::path& path, VectorFormat format) {
  VectorTable input = load_table(path, format);

  std::vector<std::uint64_t> counts(input.words.size(), 1);
  const auto vocab_path = with_suffix(path, ".vocab");
  if (std::filesystem::exists(vocab_path)) {
    auto in = open_in(vocab_path, false);
    std::string line;
    std::size_t r = 0;
    for (; std::getline(in, line); ++r) {
      const auto tab = line.find('\t');
      if (r >= counts.size() || tab == std::string::npos || line.compare(0, tab, input.words[r]) != 0) {
        throw DataError(vocab_path.string() + ": line " + std::to_string(r + 1) +
                        " does not match vector " + record_label(r));
      }
      std::uint64_t c = 0;
      const char* first = line.data() + tab + 1;
      const char* last = line.data() + line.size();
      auto [p, ec] = std::from_chars(first, last, c);
      if (ec != std::errc{} || (p != last && *p != '\r')) {
        throw DataError(vocab_path.string() + ": line " + std::to_string(r + 1) + ": bad count");
      }
      counts[r] = c;
    }
    if (r != counts.size()) {
      throw DataError(vocab_path.string() + ": " + std::to_string(r) + " lines for " +
                      std::to_string(counts.size()) + " vectors");
    }
  }

  Vocabulary vocab;
  for (std::size_t r = 0; r < input.words.size(); ++r) vocab.add(input.words[r], counts[r]);
  SemanticSpace space(std::move(vocab), input.dim);
  std::copy(input.values.begin(), input.values.end(), space.input_data().begin());

  const auto out_path = with_suffix(path, ".out");
  if (std::filesystem::exists(out_path)) {
    VectorTable output = load_table(out_path, format);
    if (output.words != input.words || output.dim != input.dim) {
      throw DataError(out_path.string() + ": vocabulary or dimension differs from '" + path.string() + "'");
    }
    std::copy(output.values.begin(), output.values.end(), space.output_data().begin());
  }
  return space;
}

}  // namespace n2v
