#include "n2v/space.hpp"

#include <algorithm>
#include <cmath>

#include "n2v/error.hpp"
#include "n2v/random.hpp"

namespace n2v {

WordId Vocabulary::add(std::string word, std::uint64_t count) {
  if (index_.find(word) != index_.end()) {
    throw DataError("duplicate word '" + word + "'");
  }
  const auto id = static_cast<WordId>(entries_.size());
  index_.emplace(word, id);
  entries_.push_back({std::move(word), count});
  total_tokens_ += count;
  return id;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

WordId Vocabulary::at(std::string_view word) const {
  auto id = find(word);
  if (!id) throw DataError("word '" + std::string(word) + "' not in vocabulary");
  return *id;
}

void Vocabulary::rename(std::string_view old_word, std::string new_word) {
  auto it = index_.find(old_word);
  if (it == index_.end()) {
    throw DataError("cannot relabel '" + std::string(old_word) + "': not in vocabulary");
  }
  if (index_.find(new_word) != index_.end()) {
    throw DataError("cannot relabel to '" + new_word + "': already in vocabulary");
  }
  const WordId id = it->second;
  index_.erase(it);
  index_.emplace(new_word, id);
  entries_[id].word = std::move(new_word);
}

void Vocabulary::pop_back() {
  if (entries_.empty()) return;
  index_.erase(entries_.back().word);
  total_tokens_ -= entries_.back().count;
  entries_.pop_back();
}

SemanticSpace::SemanticSpace(Vocabulary vocab, std::size_t dim)
    : vocab_(std::move(vocab)),
      dim_(dim),
      input_(vocab_.size() * dim, 0.0f),
      output_(vocab_.size() * dim, 0.0f) {}

WordId SemanticSpace::add_word(std::string word, std::span<const float> init,
                               std::uint64_t count) {
  if (init.size() != dim_) {
    throw ValidationError("add_word: init vector has dimension " + std::to_string(init.size()) +
                          ", space has " + std::to_string(dim_));
  }
  const WordId id = vocab_.add(std::move(word), count);
  input_.insert(input_.end(), init.begin(), init.end());
  output_.resize(output_.size() + dim_, 0.0f);
  return id;
}

void SemanticSpace::relabel(std::string_view old_word, std::string new_word) {
  vocab_.rename(old_word, std::move(new_word));
}

void SemanticSpace::pop_word() {
  if (vocab_.empty()) return;
  vocab_.pop_back();
  input_.resize(input_.size() - dim_);
  output_.resize(output_.size() - dim_);
}

std::uint64_t SemanticSpace::checksum() const {
  Fnv1a h;
  for (const auto& e : vocab_.entries()) {
    h.update(e.word.data(), e.word.size());
    h.update("\0", 1);
    h.update(&e.count, sizeof e.count);
  }
  h.update(input_.data(), input_.size() * sizeof(float));
  h.update(output_.data(), output_.size() * sizeof(float));
  return h.digest();
}

std::uint64_t SemanticSpace::rows_checksum(std::size_t rows) const {
  rows = std::min(rows, size());
  Fnv1a h;
  h.update(input_.data(), rows * dim_ * sizeof(float));
  h.update(output_.data(), rows * dim_ * sizeof(float));
  return h.digest();
}

double dot(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

double norm(std::span<const float> a) { return std::sqrt(dot(a, a)); }

namespace {

// Shared by cosine() and the ranking loops so that every similarity is
// computed by the same expression, bit for bit.
double cosine_with_norms(std::span<const float> a, double norm_a, std::span<const float> b,
                         double norm_b) {
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  const double c = dot(a, b) / (norm_a * norm_b);
  return std::clamp(c, -1.0, 1.0);
}

bool ranks_before(double sim_a, WordId a, double sim_b, WordId b) {
  return sim_a > sim_b || (sim_a == sim_b && a < b);
}

void check_query(const SemanticSpace& space, std::span<const float> query) {
  if (space.size() == 0) throw DataError("nearest neighbor query on an empty vocabulary");
  if (query.size() != space.dim()) {
    throw ValidationError("query has dimension " + std::to_string(query.size()) + ", space has " +
                          std::to_string(space.dim()));
  }
}

}  // namespace

double cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw ValidationError("cosine: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
  // Norm product is commutative, so cosine(a, b) == cosine(b, a) exactly.
  return cosine_with_norms(a, norm(a), b, norm(b));
}

NeighborList nearest_neighbors(const SemanticSpace& space, std::span<const float> query,
                               std::size_t k, const WordSet& exclude) {
  NeighborList result;
  if (k == 0) return result;
  check_query(space, query);

  const auto& vocab = space.vocab();
  const double qn = norm(query);

  struct Scored {
    double sim;
    WordId id;
  };
  auto before = [](const Scored& a, const Scored& b) { return ranks_before(a.sim, a.id, b.sim, b.id); };

  // Bounded heap holding the best k so far; top is the current worst.
  std::vector<Scored> heap;
  heap.reserve(std::min(k, space.size()) + 1);
  for (WordId id = 0; id < space.size(); ++id) {
    if (!exclude.empty() && exclude.contains(vocab.word(id))) continue;
    const auto row = space.input(id);
    const Scored s{cosine_with_norms(query, qn, row, norm(row)), id};
    if (heap.size() < k) {
      heap.push_back(s);
      std::push_heap(heap.begin(), heap.end(), before);
    } else if (before(s, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), before);
      heap.back() = s;
      std::push_heap(heap.begin(), heap.end(), before);
    }
  }
  std::sort_heap(heap.begin(), heap.end(), before);

  result.items.reserve(heap.size());
  for (const auto& s : heap) result.items.push_back({vocab.word(s.id), s.id, s.sim});
  return result;
}

std::size_t rank_of(const SemanticSpace& space, std::span<const float> query,
                    std::string_view target_word, const WordSet& exclude) {
  check_query(space, query);
  const auto& vocab = space.vocab();
  const auto target = vocab.find(target_word);
  if (!target) throw DataError("rank_of: target '" + std::string(target_word) + "' not in vocabulary");
  if (exclude.contains(target_word)) {
    throw ValidationError("rank_of: target '" + std::string(target_word) + "' is excluded");
  }

  const double qn = norm(query);
  const auto target_row = space.input(*target);
  const double target_sim = cosine_with_norms(query, qn, target_row, norm(target_row));

  std::size_t rank = 1;
  for (WordId id = 0; id < space.size(); ++id) {
    if (id == *target) continue;
    if (!exclude.empty() && exclude.contains(vocab.word(id))) continue;
    const auto row = space.input(id);
    if (ranks_before(cosine_with_norms(query, qn, row, norm(row)), id, target_sim, *target)) ++rank;
  }
  return rank;
}

}  // namespace n2v
