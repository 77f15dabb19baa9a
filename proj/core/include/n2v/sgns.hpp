#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "n2v/corpus.hpp"
#include "n2v/error.hpp"
#include "n2v/random.hpp"
#include "n2v/space.hpp"

namespace n2v::sgns {

/// Background-phase hyperparameters. Defaults are the standard toolkit
/// values (the configuration the background space was trained with).
struct TrainConfig {
  double alpha0 = 0.025;
  double alpha_min = 0.0001;
  int window = 5;
  int negatives = 5;
  double subsample_t = 1e-3;
  int epochs = 5;
  std::uint64_t min_count = 50;
  std::size_t dim = 400;
  double noise_exponent = 0.75;
  std::uint64_t seed = 1;
  int workers = 1;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;
};

/// Samples word ids with P(w) proportional to count(w)^exponent (Vose alias
/// method, O(1) per draw).
class NoiseTable {
 public:
  NoiseTable() = default;
  NoiseTable(const Vocabulary& vocab, double exponent = 0.75);

  std::size_t size() const { return prob_.size(); }
  WordId draw(Rng& rng) const;
  /// Normalized target probability of id, for diagnostics and tests.
  double probability(WordId id) const { return weight_[id]; }

 private:
  std::vector<double> prob_;
  std::vector<WordId> alias_;
  std::vector<double> weight_;
};

/// Counts every token; keeps words with count >= min_count ordered by
/// descending count, ties by first occurrence. Throws DataError if the
/// corpus holds no tokens.
Vocabulary build_vocab(const SentenceSource& corpus, std::uint64_t min_count);

/// Subsampling keep rule, z = count / total:
///   clamp((sqrt(z / t) + 1) * t / z, 0, 1)
double keep_probability(std::uint64_t count, std::uint64_t total, double t);

/// k i.i.d. draws from the noise table; draws equal to `forbidden` are
/// redrawn. Throws ValidationError if the table has fewer than two words.
std::vector<WordId> draw_negatives(const NoiseTable& table, int k, WordId forbidden, Rng& rng);

/// Numerically stable -log(sigmoid(x)).
inline double neg_log_sigmoid(double x) {
  return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace detail {

// Fixed-order 8-lane reduction: deterministic and vectorizable.
template <typename Real>
Real dot(const Real* a, const Real* b, std::size_t n) {
  Real lanes[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (std::size_t k = 0; k < 8; ++k) lanes[k] += a[i + k] * b[i + k];
  }
  Real s = ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) + ((lanes[4] + lanes[5]) + (lanes[6] + lanes[7]));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

template <typename Real>
void axpy(Real g, const Real* x, Real* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += g * x[i];
}

}  // namespace detail

namespace detail {

template <typename Real, bool kWithLoss>
double sgd_update(MatrixView<Real> input, MatrixView<Real> output, WordId target, WordId context,
                  std::span<const WordId> negatives, double alpha, bool freeze_context, bool freeze_target) {
  const std::size_t d = input.dim;
  Real* v = input.row(target).data();
  auto row_id = [&](std::size_t j) { return j == 0 ? context : negatives[j - 1]; };

  // coeff[j] = -alpha * dL/d(v.u_j); j = 0 is the context.
  thread_local std::vector<Real> coeff;
  coeff.resize(negatives.size() + 1);
  double loss = 0.0;
  for (std::size_t j = 0; j < coeff.size(); ++j) {
    const double s = dot<Real>(v, output.row(row_id(j)).data(), d);
    const double label = j == 0 ? 1.0 : 0.0;
    if constexpr (kWithLoss) loss += neg_log_sigmoid(j == 0 ? s : -s);
    const double c = alpha * (label - sigmoid(s));
    if (!std::isfinite(c)) throw DivergenceError("non-finite score in sgd_step");
    coeff[j] = static_cast<Real>(c);
  }
  if (!std::isfinite(loss)) throw DivergenceError("non-finite loss in sgd_step");
  if (alpha == 0.0 || (freeze_context && freeze_target)) return loss;

  thread_local std::vector<Real> target_step;
  target_step.assign(d, Real(0));
  for (std::size_t j = 0; j < coeff.size(); ++j) {
    axpy<Real>(coeff[j], output.row(row_id(j)).data(), target_step.data(), d);
  }
  for (Real x : target_step) {
    if (!std::isfinite(x)) throw DivergenceError("non-finite gradient in sgd_step");
  }
  if (!freeze_context) {
    for (std::size_t j = 0; j < coeff.size(); ++j) axpy<Real>(coeff[j], v, output.row(row_id(j)).data(), d);
  }
  if (!freeze_target) {
    for (std::size_t i = 0; i < d; ++i) v[i] += target_step[i];
  }
  return loss;
}

}  // namespace detail

/// One negative-sampling SGD update for the pair (target, context) on raw
/// input/output matrices. With v = input[target], u_c = output[context],
/// u_n = output[negatives[n]]:
///
///   L = -log s(v.u_c) - sum_n log s(-v.u_n)
///
/// All gradients are evaluated at the pre-update point and then applied with
/// step alpha; repeated negative ids accumulate. Frozen rows are left
/// untouched. Returns L before the update. Throws DivergenceError if any
/// intermediate is non-finite (nothing is written in that case).
template <typename Real>
double sgd_step(MatrixView<Real> input, MatrixView<Real> output, WordId target, WordId context,
                std::span<const WordId> negatives, double alpha, bool freeze_context,
                bool freeze_target) {
  return detail::sgd_update<Real, true>(input, output, target, context, negatives, alpha, freeze_context,
                                        freeze_target);
}

/// sgd_step on a SemanticSpace; ids must be valid rows.
double sgd_step(SemanticSpace& space, WordId target, WordId context, std::span<const WordId> negatives,
                double alpha, bool freeze_context, bool freeze_target);

/// Uniform initialization in [-0.5/d, 0.5/d).
void random_init(std::span<float> row, Rng& rng);

struct TrainProgress {
  std::uint64_t words_processed = 0;
  std::uint64_t words_total = 0;
  double alpha = 0.0;
  int epoch = 0;
};
using ProgressCallback = std::function<void(const TrainProgress&)>;

/// Trains a skip-gram negative-sampling space from scratch.
///
/// Passes over the corpus: one for the vocabulary, then `epochs` training
/// passes. Each training pass subsamples words, draws an effective window
/// uniformly from [1, window] per position, and runs sgd_step over every
/// in-window pair within the sentence. Alpha decays linearly from alpha0 to
/// alpha_min over epochs * total_tokens words. With workers > 1, sentence
/// batches are split across threads that update the shared matrices without
/// locking; runs are bit-reproducible only with workers == 1.
///
/// `progress` is invoked roughly once per million processed words.
SemanticSpace train_background(const SentenceSource& corpus, const TrainConfig& config,
                               const ProgressCallback& progress = {});

/// Trains on an already-initialized space (vocabulary fixed). Used by
/// train_background after initialization.
void train_epochs(SemanticSpace& space, const SentenceSource& corpus, const TrainConfig& config,
                  const ProgressCallback& progress = {});

}  // namespace n2v::sgns
