#include "n2v/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <thread>
#include <unordered_map>

namespace n2v::sgns {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(what);
}

void fill_negatives(const NoiseTable& table, int k, WordId forbidden, Rng& rng, std::vector<WordId>& out) {
  out.clear();
  for (int i = 0; i < k; ++i) {
    WordId id = table.draw(rng);
    while (id == forbidden) id = table.draw(rng);
    out.push_back(id);
  }
}

constexpr std::uint64_t kProgressInterval = 1'000'000;

// Sentences encoded as in-vocabulary ids; OOV tokens are dropped.
struct Batch {
  std::vector<WordId> ids;
  std::vector<std::size_t> starts{0};
  std::vector<std::uint32_t> raw_lengths;  // in-vocab tokens before subsampling

  std::size_t sentences() const { return raw_lengths.size(); }
  std::size_t tokens() const { return ids.size(); }
  void clear() {
    ids.clear();
    starts.assign(1, 0);
    raw_lengths.clear();
  }
};

class EpochRunner {
 public:
  EpochRunner(SemanticSpace& space, const TrainConfig& config)
      : space_(space),
        config_(config),
        table_(space.vocab(), config.noise_exponent),
        words_total_(static_cast<std::uint64_t>(config.epochs) * space.vocab().total_tokens()) {
    const auto& vocab = space.vocab();
    keep_.resize(vocab.size());
    for (WordId id = 0; id < vocab.size(); ++id) {
      keep_[id] = keep_probability(std::max<std::uint64_t>(vocab.count(id), 1),
                                   std::max<std::uint64_t>(vocab.total_tokens(), 1), config.subsample_t);
    }
    for (int w = 0; w < config.workers; ++w) {
      workers_.push_back({Rng(mix_seed(config.seed, 1 + static_cast<std::uint64_t>(w))), {}, {}});
    }
  }

  void run(const SentenceSource& corpus, const ProgressCallback& progress) {
    const std::size_t flush_tokens = 100'000 * static_cast<std::size_t>(config_.workers);
    const auto& vocab = space_.vocab();
    for (int epoch = 0; epoch < config_.epochs; ++epoch) {
      epoch_ = epoch;
      Batch batch;
      corpus.for_each([&](std::span<const std::string_view> tokens) {
        for (auto tok : tokens) {
          if (auto id = vocab.find(tok)) batch.ids.push_back(*id);
        }
        batch.raw_lengths.push_back(static_cast<std::uint32_t>(batch.ids.size() - batch.starts.back()));
        batch.starts.push_back(batch.ids.size());
        if (batch.tokens() >= flush_tokens) {
          process(batch, progress);
          batch.clear();
        }
      });
      if (batch.sentences() > 0) process(batch, progress);
    }
  }

 private:
  struct Worker {
    Rng rng;
    std::vector<WordId> survivors;
    std::vector<WordId> negatives;
  };

  void process(const Batch& batch, const ProgressCallback& progress) {
    const std::size_t n = batch.sentences();
    if (config_.workers == 1) {
      process_range(batch, 0, n, workers_[0]);
    } else {
      std::vector<std::thread> threads;
      std::vector<std::exception_ptr> errors(workers_.size());
      const std::size_t per = (n + workers_.size() - 1) / workers_.size();
      for (std::size_t w = 0; w < workers_.size(); ++w) {
        const std::size_t lo = std::min(n, w * per);
        const std::size_t hi = std::min(n, lo + per);
        threads.emplace_back([&, w, lo, hi] {
          try {
            process_range(batch, lo, hi, workers_[w]);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& t : threads) t.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    const std::uint64_t done = processed_.load();
    if (progress && done / kProgressInterval != reported_ / kProgressInterval) {
      progress({done, words_total_, current_alpha(done), epoch_});
    }
    reported_ = done;
  }

  double current_alpha(std::uint64_t done) const {
    const double frac = words_total_ == 0 ? 0.0 : static_cast<double>(done) / static_cast<double>(words_total_);
    return std::max(config_.alpha_min, config_.alpha0 - (config_.alpha0 - config_.alpha_min) * frac);
  }

  void process_range(const Batch& batch, std::size_t lo, std::size_t hi, Worker& worker) {
    auto input = space_.input_view();
    auto output = space_.output_view();
    for (std::size_t s = lo; s < hi; ++s) {
      const double alpha = current_alpha(processed_.load(std::memory_order_relaxed));
      processed_.fetch_add(batch.raw_lengths[s], std::memory_order_relaxed);

      auto& kept = worker.survivors;
      kept.clear();
      for (std::size_t i = batch.starts[s]; i < batch.starts[s + 1]; ++i) {
        const WordId id = batch.ids[i];
        if (keep_[id] >= 1.0 || worker.rng.uniform() < keep_[id]) kept.push_back(id);
      }

      const auto len = static_cast<std::ptrdiff_t>(kept.size());
      for (std::ptrdiff_t i = 0; i < len; ++i) {
        const auto b = worker.rng.between(1, config_.window);
        const std::ptrdiff_t from = std::max<std::ptrdiff_t>(0, i - b);
        const std::ptrdiff_t to = std::min<std::ptrdiff_t>(len - 1, i + b);
        for (std::ptrdiff_t j = from; j <= to; ++j) {
          if (j == i) continue;
          fill_negatives(table_, config_.negatives, kept[j], worker.rng, worker.negatives);
          detail::sgd_update<float, false>(input, output, kept[i], kept[j], worker.negatives, alpha, false, false);
        }
      }
    }
  }

  SemanticSpace& space_;
  const TrainConfig& config_;
  NoiseTable table_;
  std::vector<double> keep_;
  std::vector<Worker> workers_;
  std::uint64_t words_total_;
  std::atomic<std::uint64_t> processed_{0};
  std::uint64_t reported_ = 0;
  int epoch_ = 0;
};

}  // namespace

void TrainConfig::validate() const {
  require(alpha_min > 0, "alpha_min must be > 0");
  require(alpha0 > alpha_min, "alpha0 must be > alpha_min");
  require(window >= 1, "window must be >= 1");
  require(negatives >= 1, "negatives must be >= 1");
  require(subsample_t > 0, "subsample threshold must be > 0");
  require(epochs >= 1, "epochs must be >= 1");
  require(dim >= 1, "dim must be >= 1");
  require(noise_exponent >= 0, "noise exponent must be >= 0");
  require(workers >= 1, "workers must be >= 1");
}

NoiseTable::NoiseTable(const Vocabulary& vocab, double exponent) {
  const std::size_t n = vocab.size();
  weight_.resize(n);
  double total = 0.0;
  for (WordId id = 0; id < n; ++id) {
    weight_[id] = std::pow(static_cast<double>(vocab.count(id)), exponent);
    total += weight_[id];
  }
  if (n == 0) return;
  if (total <= 0) {
    std::fill(weight_.begin(), weight_.end(), 1.0);
    total = static_cast<double>(n);
  }
  for (auto& w : weight_) w /= total;

  // Vose's alias method.
  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<WordId> small;
  std::vector<WordId> large;
  for (WordId id = 0; id < n; ++id) {
    scaled[id] = weight_[id] * static_cast<double>(n);
    (scaled[id] < 1.0 ? small : large).push_back(id);
  }
  while (!small.empty() && !large.empty()) {
    const WordId s = small.back();
    small.pop_back();
    const WordId l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (WordId id : large) prob_[id] = 1.0;
  for (WordId id : small) prob_[id] = 1.0;
}

WordId NoiseTable::draw(Rng& rng) const {
  const auto column = static_cast<WordId>(rng.below(prob_.size()));
  return rng.uniform() < prob_[column] ? column : alias_[column];
}

Vocabulary build_vocab(const SentenceSource& corpus, std::uint64_t min_count) {
  struct Tally {
    std::uint64_t count = 0;
    std::size_t first = 0;
  };
  std::unordered_map<std::string, Tally, StringHash, std::equal_to<>> tally;
  std::size_t seen = 0;
  corpus.for_each([&](std::span<const std::string_view> tokens) {
    for (auto tok : tokens) {
      auto it = tally.find(tok);
      if (it == tally.end()) it = tally.emplace(std::string(tok), Tally{0, seen}).first;
      ++it->second.count;
      ++seen;
    }
  });
  if (seen == 0) throw DataError("build_vocab: corpus contains no tokens");

  std::vector<std::pair<const std::string*, Tally>> kept;
  for (const auto& [word, t] : tally) {
    if (t.count >= min_count) kept.emplace_back(&word, t);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second.count != b.second.count ? a.second.count > b.second.count : a.second.first < b.second.first;
  });
  Vocabulary vocab;
  for (const auto& [word, t] : kept) vocab.add(*word, t.count);
  return vocab;
}

double keep_probability(std::uint64_t count, std::uint64_t total, double t) {
  const double z = static_cast<double>(count) / static_cast<double>(total);
  const double p = (std::sqrt(z / t) + 1.0) * (t / z);
  return std::clamp(p, 0.0, 1.0);
}

std::vector<WordId> draw_negatives(const NoiseTable& table, int k, WordId forbidden, Rng& rng) {
  std::vector<WordId> out;
  if (k <= 0) return out;
  if (table.size() < 2) throw ValidationError("draw_negatives needs a vocabulary of at least 2 words");
  fill_negatives(table, k, forbidden, rng, out);
  return out;
}

double sgd_step(SemanticSpace& space, WordId target, WordId context, std::span<const WordId> negatives,
                double alpha, bool freeze_context, bool freeze_target) {
  const auto n = space.size();
  if (target >= n || context >= n) throw ValidationError("sgd_step: row id out of range");
  for (WordId id : negatives) {
    if (id >= n) throw ValidationError("sgd_step: negative id out of range");
  }
  if (!(alpha >= 0)) throw ValidationError("sgd_step: alpha must be >= 0");
  return sgd_step<float>(space.input_view(), space.output_view(), target, context, negatives, alpha,
                         freeze_context, freeze_target);
}

void random_init(std::span<float> row, Rng& rng) {
  const double d = static_cast<double>(row.size());
  for (auto& x : row) x = static_cast<float>((rng.uniform() - 0.5) / d);
}

void train_epochs(SemanticSpace& space, const SentenceSource& corpus, const TrainConfig& config,
                  const ProgressCallback& progress) {
  config.validate();
  if (space.size() < 2) throw DataError("training needs a vocabulary of at least 2 words");
  EpochRunner runner(space, config);
  runner.run(corpus, progress);
}

SemanticSpace train_background(const SentenceSource& corpus, const TrainConfig& config,
                               const ProgressCallback& progress) {
  config.validate();
  Vocabulary vocab = build_vocab(corpus, config.min_count);
  if (vocab.empty()) {
    throw DataError("no word reaches min_count " + std::to_string(config.min_count));
  }
  SemanticSpace space(std::move(vocab), config.dim);
  Rng init_rng(mix_seed(config.seed, 0));
  for (WordId id = 0; id < space.size(); ++id) random_init(space.input(id), init_rng);
  train_epochs(space, corpus, config, progress);
  return space;
}

}  // namespace n2v::sgns
