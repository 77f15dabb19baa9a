#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "n2v/data.hpp"
#include "n2v/nonce.hpp"
#include "n2v/space.hpp"

namespace n2v::eval {

enum class Learner { nonce2vec, sum, vanilla };

Learner parse_learner(std::string_view name);
std::string_view to_string(Learner learner);

/// Decimal or fraction ("1/70"); nullopt when malformed.
std::optional<double> parse_number(std::string_view s);

/// Mean of 1/rank. Throws ValidationError on an empty list or a zero rank.
double mrr(std::span<const std::size_t> ranks);

/// Lower median. Throws ValidationError on an empty list.
std::size_t median_rank(std::span<const std::size_t> ranks);

/// 1-based ranks, ties get the average of the positions they span.
std::vector<double> fractional_ranks(std::span<const double> values);

/// Pearson correlation of fractional ranks. Returns nullopt when either list
/// is constant. Throws ValidationError on a length mismatch or fewer than two
/// values.
std::optional<double> spearman(std::span<const double> a, std::span<const double> b);

struct ItemResult {
  std::string id;
  bool skipped = false;
  double value = 0.0;         // reciprocal rank or rho
  std::size_t rank = 0;       // definitional only
  std::size_t probes_used = 0;
  std::size_t probes_dropped = 0;
  std::string note;
};

struct EvalReport {
  std::string protocol;  // "definitional" or "chimeras"
  Learner learner = Learner::nonce2vec;
  std::vector<ItemResult> items;
  double aggregate = 0.0;      // MRR or mean rho over evaluated items
  std::size_t median_rank = 0; // definitional only
  std::size_t n_items = 0;
  std::size_t n_skipped = 0;

  /// Recomputes aggregate, median rank and counts from `items`.
  void finalize();

  /// Per-item TSV with a header row.
  void write_tsv(std::ostream& out) const;
  /// One "key=value" summary line.
  std::string summary() const;
};

struct EvalOptions {
  Learner learner = Learner::nonce2vec;
  nonce::NonceConfig config;
  WordSet stopwords;   // sum learner only
  int workers = 1;
  std::string gold_suffix = "_gold";
};

/// Per instance, on an isolated copy of `space`: relabel target to
/// target + gold_suffix, learn the nonce from the definition, then rank the
/// gold among all vocabulary rows except the nonce. Targets absent from
/// the space are skipped.
EvalReport eval_definitional(const SemanticSpace& space, const std::vector<data::DefinitionalInstance>& instances,
                             const EvalOptions& options);

/// Per trial, on an isolated copy: learn the nonce from the trial's
/// sentences, correlate cosine(nonce, probe) with the human ratings. OOV
/// probes are dropped; trials with fewer than two usable probes or a
/// constant similarity list are skipped.
EvalReport eval_chimeras(const SemanticSpace& space, const std::vector<data::ChimeraTrial>& trials,
                         const EvalOptions& options);

struct MenResult {
  double rho = 0.0;
  std::size_t used = 0;
  std::size_t dropped = 0;
};

/// Spearman between cosine similarities and human scores over in-vocabulary
/// pairs. Throws DataError with fewer than two usable pairs.
MenResult eval_men(const SemanticSpace& space, const std::vector<data::SimilarityPair>& pairs);

/// Hyperparameter grid: ordered axes, Cartesian product with the first axis
/// varying slowest.
struct ParamGrid {
  std::vector<std::pair<std::string, std::vector<double>>> axes;

  std::size_t size() const;
  /// Assignment for the i-th cell in grid order.
  std::vector<std::pair<std::string, double>> cell(std::size_t index) const;
};

/// "name<TAB>v1,v2,..." per line. Values may be written as fractions
/// ("1/70"). Names: alpha, lambda, window, window_decay, window_min, neg,
/// epochs, sample, sample_factor.
ParamGrid parse_grid(std::istream& in);
ParamGrid load_grid(const std::filesystem::path& path);

/// Applies one named parameter; throws ValidationError on unknown names.
void apply_param(nonce::NonceConfig& config, std::string_view name, double value);

struct GridRow {
  std::vector<std::pair<std::string, double>> assignment;
  nonce::NonceConfig config;
  double score = 0.0;
  std::size_t median_rank = 0;
  std::size_t n_skipped = 0;
};

struct GridResult {
  std::vector<GridRow> rows;
  std::size_t best = 0;

  void write_tsv(std::ostream& out) const;
};

/// Exhaustive sweep; best by MRR, ties to the earliest cell.
GridResult grid_search(const SemanticSpace& space, const std::vector<data::DefinitionalInstance>& train,
                       const ParamGrid& grid, const EvalOptions& base);

/// Exhaustive sweep; best by mean rho, ties to the earliest cell.
GridResult grid_search(const SemanticSpace& space, const std::vector<data::ChimeraTrial>& train,
                       const ParamGrid& grid, const EvalOptions& base);

}  // namespace n2v::eval
