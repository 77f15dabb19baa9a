#pragma once

#include <filesystem>
#include <iosfwd>

#include "n2v/space.hpp"

namespace n2v {

enum class VectorFormat { text, binary };

VectorFormat parse_vector_format(std::string_view name);

/// Writes the word2vec-style vector file `path` holding the input vectors,
/// plus two sidecars:
///   path.vocab  "token<TAB>count" per line, in row order
///   path.out    output (context) vectors in the same format as `path`
///
/// Vector file layout: a "|V| d" header line, then one record per word.
///   text:   token, d space-separated decimals, newline
///   binary: token bytes, one space, d little-endian IEEE-754 floats
void save_space(const SemanticSpace& space, const std::filesystem::path& path, VectorFormat format);

/// Inverse of save_space. Missing sidecars are tolerated: without path.out
/// the output rows are zero, without path.vocab every count is 1.
/// Malformed headers, truncated or duplicate records raise DataError naming
/// the record; unreadable files raise IoError.
SemanticSpace load_space(const std::filesystem::path& path, VectorFormat format);

/// Stream-level primitives behind save_space/load_space.
struct VectorTable {
  std::vector<std::string> words;
  std::size_t dim = 0;
  std::vector<float> values;  // words.size() x dim, row-major
};

void write_vectors(std::ostream& out, const VectorTable& table, VectorFormat format);
VectorTable read_vectors(std::istream& in, VectorFormat format);

/// Formats one vector as a text-format record ("token v1 v2 ...").
std::string format_vector_record(std::string_view token, std::span<const float> values);

}  // namespace n2v
