#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "n2v/corpus.hpp"
#include "n2v/random.hpp"
#include "n2v/space.hpp"

namespace n2v::nonce {

/// Hyperparameters for learning one unknown word from a few sentences.
/// Defaults are the best configuration found on the definitional training
/// split, plus the per-sentence schedule tuned on chimeras.
struct NonceConfig {
  double alpha0 = 1.0;
  double lambda = 1.0 / 70.0;
  int window0 = 15;
  int window_decay = 5;
  int window_min = 3;
  int negatives = 3;
  int epochs = 1;
  /// Multiplier on the background subsampling threshold.
  double subsample_mult0 = 10000.0;
  /// The effective threshold is divided by this after every sentence.
  double subsample_factor = 1.9;
  /// Threshold the background space was trained with.
  double background_subsample_t = 1e-3;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Standard incremental-update baseline: the background trainer's settings
/// applied to the nonce sentences, with no freezing.
struct VanillaConfig {
  double alpha0 = 0.025;
  double alpha_min = 0.0001;
  int window = 5;
  int negatives = 5;
  double subsample_t = 1e-3;
  int epochs = 1;
  std::uint64_t seed = 1;
};

enum class Mode { nonce2vec, vanilla };

Mode parse_mode(std::string_view name);
std::string_view to_string(Mode mode);

/// alpha0 * exp(-lambda * t)
double decayed_alpha(double alpha0, double lambda, std::uint64_t t);

/// max(floor, window0 - decay * sentence_index)
int window_schedule(int window0, int decay, int floor, std::uint64_t sentence_index);

/// subsample_mult0 * background_t / subsample_factor^sentence_index
double threshold_schedule(const NonceConfig& config, std::uint64_t sentence_index);

/// Running state of one nonce2vec learning session.
class NonceSession {
 public:
  explicit NonceSession(const NonceConfig& config) : config_(config) {}

  std::uint64_t pairs_trained() const { return t_; }
  std::uint64_t sentence_index() const { return sentence_index_; }

  double alpha() const { return decayed_alpha(config_.alpha0, config_.lambda, t_); }
  int half_window() const {
    return window_schedule(config_.window0, config_.window_decay, config_.window_min, sentence_index_);
  }
  double threshold() const { return threshold_schedule(config_, sentence_index_); }

  void advance_pair() { ++t_; }
  void advance_sentence() { ++sentence_index_; }

 private:
  const NonceConfig& config_;
  std::uint64_t t_ = 0;
  std::uint64_t sentence_index_ = 0;
};

/// Per-step record of a learning run.
struct Trace {
  std::vector<double> pair_alphas;
  std::vector<int> sentence_windows;
  std::vector<double> sentence_thresholds;
};

struct LearnedVector {
  std::vector<float> vector;
  WordId row = 0;
  Trace trace;
};

/// Sum of the input vectors of known context words that survive a
/// subsampling draw at each sentence's scheduled threshold. Falls back to
/// the sum over all known context words, then to a random vector in
/// [-0.5/d, 0.5/d) when no context word is known.
std::vector<float> sum_initialize(const SemanticSpace& space, const std::vector<Sentence>& sentences,
                                  const NonceConfig& config, Rng& rng);

/// Additive baseline: plain sum of the input vectors of every known,
/// non-stopword, non-slot token. No normalization. Throws DataError
/// ("unevaluable") when nothing survives.
std::vector<float> sum_baseline(const SemanticSpace& space, const std::vector<Sentence>& sentences,
                                const WordSet& stopwords);

/// Adds `nonce_word` to `space` and learns its vector from the slotted
/// sentences.
///
/// nonce2vec: sum-initialized; sentences processed in order with the
/// per-sentence window and subsampling schedules; every (nonce, context)
/// pair inside the fixed half-window is trained with the context and
/// negative rows frozen, at decayed_alpha(alpha0, lambda, t) where t counts
/// trained pairs. Only the nonce's input row changes.
///
/// vanilla: randomly initialized; the background trainer's update rule over
/// the sentences (random window resizing, subsampling against the
/// frequencies of the update sentences, linear alpha decay), all rows free.
///
/// Throws DataError when no sentence contains the slot and DivergenceError
/// on a non-finite result.
LearnedVector learn_nonce(SemanticSpace& space, const std::vector<Sentence>& sentences,
                          const NonceConfig& config, Mode mode = Mode::nonce2vec,
                          const std::string& nonce_word = std::string(kSlot));

LearnedVector learn_vanilla(SemanticSpace& space, const std::vector<Sentence>& sentences,
                            const VanillaConfig& config, const std::string& nonce_word = std::string(kSlot));

/// Number of slot tokens across the sentences.
std::size_t count_slots(const std::vector<Sentence>& sentences);

}  // namespace n2v::nonce
