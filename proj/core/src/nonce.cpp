#include "n2v/nonce.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "n2v/error.hpp"
#include "n2v/sgns.hpp"

namespace n2v::nonce {
namespace {

constexpr WordId kNonceMarker = static_cast<WordId>(-1);

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(what);
}

bool is_nonce_token(const std::string& tok, const std::string& nonce_word) {
  return tok == kSlot || tok == nonce_word;
}

std::size_t count_nonce_tokens(const std::vector<Sentence>& sentences, const std::string& nonce_word) {
  std::size_t n = 0;
  for (const auto& s : sentences) {
    n += static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [&](const std::string& t) { return is_nonce_token(t, nonce_word); }));
  }
  return n;
}

std::size_t require_slots(SemanticSpace& space, const std::vector<Sentence>& sentences,
                          const std::string& nonce_word) {
  const std::size_t slots = count_nonce_tokens(sentences, nonce_word);
  if (slots == 0) throw DataError("no slot token '" + std::string(kSlot) + "' in the nonce sentences");
  if (space.vocab().contains(nonce_word)) {
    throw DataError("nonce '" + nonce_word + "' is already in the vocabulary");
  }
  if (space.size() < 2) throw DataError("background space needs at least 2 words");
  return slots;
}

void add_into(std::vector<double>& acc, std::span<const float> row) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += row[i];
}

std::vector<float> to_float(const std::vector<double>& acc) {
  return {acc.begin(), acc.end()};
}

std::vector<float> checked_row(const SemanticSpace& space, WordId id) {
  auto row = space.input(id);
  for (float x : row) {
    if (!std::isfinite(x)) throw DivergenceError("learned nonce vector is not finite");
  }
  return {row.begin(), row.end()};
}

}  // namespace

void NonceConfig::validate() const {
  require(alpha0 > 0, "alpha0 must be > 0");
  require(lambda >= 0, "lambda must be >= 0");
  require(window_min >= 1, "window_min must be >= 1");
  require(window0 >= window_min, "window0 must be >= window_min");
  require(window_decay >= 0, "window_decay must be >= 0");
  require(negatives >= 1, "negatives must be >= 1");
  require(epochs >= 1, "epochs must be >= 1");
  require(subsample_mult0 > 0, "subsample multiplier must be > 0");
  require(subsample_factor >= 1, "subsample factor must be >= 1");
  require(background_subsample_t > 0, "background subsample threshold must be > 0");
}

Mode parse_mode(std::string_view name) {
  if (name == "nonce2vec") return Mode::nonce2vec;
  if (name == "vanilla") return Mode::vanilla;
  throw ValidationError("unknown mode '" + std::string(name) + "' (expected nonce2vec or vanilla)");
}

std::string_view to_string(Mode mode) { return mode == Mode::nonce2vec ? "nonce2vec" : "vanilla"; }

double decayed_alpha(double alpha0, double lambda, std::uint64_t t) {
  if (t == 0) return alpha0;  // also keeps lambda = inf well defined
  return alpha0 * std::exp(-lambda * static_cast<double>(t));
}

int window_schedule(int window0, int decay, int floor, std::uint64_t sentence_index) {
  const auto w = static_cast<long long>(window0) - static_cast<long long>(decay) * static_cast<long long>(sentence_index);
  return static_cast<int>(std::max<long long>(floor, w));
}

double threshold_schedule(const NonceConfig& config, std::uint64_t sentence_index) {
  return config.subsample_mult0 * config.background_subsample_t /
         std::pow(config.subsample_factor, static_cast<double>(sentence_index));
}

std::size_t count_slots(const std::vector<Sentence>& sentences) {
  return count_nonce_tokens(sentences, std::string(kSlot));
}

std::vector<float> sum_initialize(const SemanticSpace& space, const std::vector<Sentence>& sentences,
                                  const NonceConfig& config, Rng& rng) {
  const auto& vocab = space.vocab();
  const std::uint64_t total = std::max<std::uint64_t>(vocab.total_tokens(), 1);
  std::vector<double> kept(space.dim(), 0.0);
  std::vector<double> all(space.dim(), 0.0);
  std::size_t n_kept = 0;
  std::size_t n_known = 0;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const double threshold = threshold_schedule(config, s);
    for (const auto& tok : sentences[s]) {
      if (tok == kSlot) continue;
      const auto id = vocab.find(tok);
      if (!id) continue;
      const auto row = space.input(*id);
      add_into(all, row);
      ++n_known;
      const double p = sgns::keep_probability(std::max<std::uint64_t>(vocab.count(*id), 1), total, threshold);
      if (p >= 1.0 || rng.uniform() < p) {
        add_into(kept, row);
        ++n_kept;
      }
    }
  }
  if (n_kept > 0) return to_float(kept);
  if (n_known > 0) return to_float(all);
  std::vector<float> random(space.dim());
  sgns::random_init(random, rng);
  return random;
}

std::vector<float> sum_baseline(const SemanticSpace& space, const std::vector<Sentence>& sentences,
                                const WordSet& stopwords) {
  const auto& vocab = space.vocab();
  std::vector<double> acc(space.dim(), 0.0);
  std::size_t used = 0;
  for (const auto& sentence : sentences) {
    for (const auto& tok : sentence) {
      if (tok == kSlot || stopwords.contains(tok)) continue;
      if (auto id = vocab.find(tok)) {
        add_into(acc, space.input(*id));
        ++used;
      }
    }
  }
  if (used == 0) throw DataError("unevaluable item: no known non-stopword context word");
  return to_float(acc);
}

LearnedVector learn_nonce(SemanticSpace& space, const std::vector<Sentence>& sentences,
                          const NonceConfig& config, Mode mode, const std::string& nonce_word) {
  if (mode == Mode::vanilla) {
    VanillaConfig vanilla;
    vanilla.seed = config.seed;
    return learn_vanilla(space, sentences, vanilla, nonce_word);
  }
  config.validate();
  const std::size_t slots = require_slots(space, sentences, nonce_word);

  const sgns::NoiseTable noise(space.vocab());
  const std::uint64_t total = std::max<std::uint64_t>(space.vocab().total_tokens(), 1);
  Rng rng(config.seed);

  const auto init = sum_initialize(space, sentences, config, rng);
  LearnedVector result;
  result.row = space.add_word(nonce_word, init, slots);
  const WordId nonce = result.row;
  const auto& vocab = space.vocab();

  NonceSession session(config);
  std::vector<WordId> kept;
  std::vector<WordId> negatives;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& sentence : sentences) {
      const int window = session.half_window();
      const double threshold = session.threshold();
      result.trace.sentence_windows.push_back(window);
      result.trace.sentence_thresholds.push_back(threshold);

      kept.clear();
      for (const auto& tok : sentence) {
        if (is_nonce_token(tok, nonce_word)) {
          kept.push_back(kNonceMarker);
          continue;
        }
        const auto id = vocab.find(tok);
        if (!id) continue;
        const double p = sgns::keep_probability(std::max<std::uint64_t>(vocab.count(*id), 1), total, threshold);
        if (p >= 1.0 || rng.uniform() < p) kept.push_back(*id);
      }

      const auto len = static_cast<std::ptrdiff_t>(kept.size());
      for (std::ptrdiff_t p = 0; p < len; ++p) {
        if (kept[p] != kNonceMarker) continue;
        const std::ptrdiff_t from = std::max<std::ptrdiff_t>(0, p - window);
        const std::ptrdiff_t to = std::min<std::ptrdiff_t>(len - 1, p + window);
        for (std::ptrdiff_t q = from; q <= to; ++q) {
          if (q == p || kept[q] == kNonceMarker) continue;
          const double alpha = session.alpha();
          result.trace.pair_alphas.push_back(alpha);
          negatives = sgns::draw_negatives(noise, config.negatives, kept[q], rng);
          sgns::sgd_step(space, nonce, kept[q], negatives, alpha, /*freeze_context=*/true,
                         /*freeze_target=*/false);
          session.advance_pair();
        }
      }
      session.advance_sentence();
    }
  }
  result.vector = checked_row(space, nonce);
  return result;
}

LearnedVector learn_vanilla(SemanticSpace& space, const std::vector<Sentence>& sentences,
                            const VanillaConfig& config, const std::string& nonce_word) {
  if (!(config.alpha0 > config.alpha_min && config.alpha_min > 0 && config.window >= 1 &&
        config.negatives >= 1 && config.subsample_t > 0 && config.epochs >= 1)) {
    throw ValidationError("invalid vanilla update configuration");
  }
  const std::size_t slots = require_slots(space, sentences, nonce_word);

  const sgns::NoiseTable noise(space.vocab());
  Rng rng(config.seed);

  std::vector<float> init(space.dim());
  sgns::random_init(init, rng);
  LearnedVector result;
  result.row = space.add_word(nonce_word, init, slots);
  const WordId nonce = result.row;
  const auto& vocab = space.vocab();

  // Encode once; frequencies for subsampling come from the update
  // sentences themselves, as when a vocabulary is extended by a new corpus.
  std::vector<std::vector<WordId>> encoded;
  std::unordered_map<WordId, std::uint64_t> update_counts;
  std::uint64_t update_total = 0;
  for (const auto& sentence : sentences) {
    auto& ids = encoded.emplace_back();
    for (const auto& tok : sentence) {
      const auto id = is_nonce_token(tok, nonce_word) ? std::optional<WordId>(nonce) : vocab.find(tok);
      if (!id) continue;
      ids.push_back(*id);
      ++update_counts[*id];
      ++update_total;
    }
  }

  const double words_total = static_cast<double>(update_total) * config.epochs;
  std::uint64_t processed = 0;
  std::vector<WordId> kept;
  std::vector<WordId> negatives;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& ids : encoded) {
      const double alpha =
          std::max(config.alpha_min,
                   config.alpha0 - (config.alpha0 - config.alpha_min) * static_cast<double>(processed) / words_total);
      processed += ids.size();
      result.trace.sentence_windows.push_back(config.window);
      result.trace.sentence_thresholds.push_back(config.subsample_t);

      kept.clear();
      for (WordId id : ids) {
        const double p = sgns::keep_probability(update_counts[id], update_total, config.subsample_t);
        if (p >= 1.0 || rng.uniform() < p) kept.push_back(id);
      }
      const auto len = static_cast<std::ptrdiff_t>(kept.size());
      for (std::ptrdiff_t i = 0; i < len; ++i) {
        const auto b = rng.between(1, config.window);
        const std::ptrdiff_t from = std::max<std::ptrdiff_t>(0, i - b);
        const std::ptrdiff_t to = std::min<std::ptrdiff_t>(len - 1, i + b);
        for (std::ptrdiff_t j = from; j <= to; ++j) {
          if (j == i) continue;
          result.trace.pair_alphas.push_back(alpha);
          negatives = sgns::draw_negatives(noise, config.negatives, kept[j], rng);
          sgns::sgd_step(space, kept[i], kept[j], negatives, alpha, false, false);
        }
      }
    }
  }
  result.vector = checked_row(space, nonce);
  return result;
}

}  // namespace n2v::nonce
