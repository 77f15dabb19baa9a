#include "n2v/eval.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <thread>

#include "n2v/error.hpp"

namespace n2v::eval {
namespace {

std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::uint64_t content_seed(std::uint64_t seed, std::string_view key, const std::vector<Sentence>& sentences) {
  Fnv1a h;
  h.update(key.data(), key.size());
  for (const auto& s : sentences) {
    for (const auto& tok : s) {
      h.update(tok.data(), tok.size());
      h.update(" ", 1);
    }
    h.update("\n", 1);
  }
  return mix_seed(seed, h.digest());
}

// Runs evaluate(scratch, item) for every item, fanned out over worker
// threads. Each worker owns a private copy of the space; `evaluate` must
// leave it as it found it.
template <typename Item, typename Fn>
std::vector<ItemResult> run_items(const SemanticSpace& space, const std::vector<Item>& items, int workers,
                                  Fn evaluate) {
  std::vector<ItemResult> results(items.size());
  const auto n_workers = static_cast<std::size_t>(std::clamp<long long>(workers, 1, std::max<long long>(1, static_cast<long long>(items.size()))));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    SemanticSpace scratch = space;
    for (std::size_t i = next++; i < items.size(); i = next++) results[i] = evaluate(scratch, items[i]);
  };
  if (n_workers == 1) {
    work();
    return results;
  }
  std::vector<std::exception_ptr> errors(n_workers);
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < n_workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        work();
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

// Learns a nonce vector into `scratch`; restore() undoes the change.
std::vector<float> learn(SemanticSpace& scratch, const std::vector<Sentence>& sentences, const EvalOptions& options,
                         const std::string& nonce_word, std::uint64_t seed) {
  nonce::NonceConfig config = options.config;
  config.seed = seed;
  switch (options.learner) {
    case Learner::sum:
      return nonce::sum_baseline(scratch, sentences, options.stopwords);
    case Learner::nonce2vec:
      return nonce::learn_nonce(scratch, sentences, config, nonce::Mode::nonce2vec, nonce_word).vector;
    case Learner::vanilla:
      return nonce::learn_nonce(scratch, sentences, config, nonce::Mode::vanilla, nonce_word).vector;
  }
  return {};
}

// Undo for learn(): nonce2vec only adds a row and writes that row, vanilla
// may touch any row and needs a full reset.
void restore(SemanticSpace& scratch, const SemanticSpace& pristine, Learner learner, std::size_t pristine_size) {
  if (learner == Learner::vanilla) {
    scratch = pristine;
  } else {
    while (scratch.size() > pristine_size) scratch.pop_word();
  }
}

void require_non_empty(std::span<const std::size_t> ranks) {
  if (ranks.empty()) throw ValidationError("rank list is empty");
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}


template <typename Item, typename EvalFn>
GridResult sweep(const ParamGrid& grid, const EvalOptions& base, EvalFn evaluate) {
  GridResult result;
  const std::size_t cells = grid.size();
  for (std::size_t c = 0; c < cells; ++c) {
    GridRow row;
    row.assignment = grid.cell(c);
    EvalOptions options = base;
    for (const auto& [name, value] : row.assignment) apply_param(options.config, name, value);
    options.config.validate();
    row.config = options.config;
    const EvalReport report = evaluate(options);
    row.score = report.aggregate;
    row.median_rank = report.median_rank;
    row.n_skipped = report.n_skipped;
    if (c == 0 || row.score > result.rows[result.best].score) result.best = c;
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace

std::optional<double> parse_number(std::string_view s) {
  double out = 0.0;
  auto trim = [](std::string_view v) {
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r')) v.remove_suffix(1);
    return v;
  };
  s = trim(s);
  auto one = [](std::string_view v, double& r) {
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), r);
    return !v.empty() && ec == std::errc{} && p == v.data() + v.size();
  };
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    double num = 0.0;
    double den = 0.0;
    if (!one(trim(s.substr(0, slash)), num) || !one(trim(s.substr(slash + 1)), den) || den == 0.0) {
      return std::nullopt;
    }
    return num / den;
  }
  if (!one(s, out)) return std::nullopt;
  return out;
}

Learner parse_learner(std::string_view name) {
  if (name == "nonce2vec") return Learner::nonce2vec;
  if (name == "sum") return Learner::sum;
  if (name == "vanilla") return Learner::vanilla;
  throw ValidationError("unknown learner '" + std::string(name) + "' (expected nonce2vec, sum or vanilla)");
}

std::string_view to_string(Learner learner) {
  switch (learner) {
    case Learner::nonce2vec:
      return "nonce2vec";
    case Learner::sum:
      return "sum";
    case Learner::vanilla:
      return "vanilla";
  }
  return "?";
}

double mrr(std::span<const std::size_t> ranks) {
  require_non_empty(ranks);
  double total = 0.0;
  for (auto r : ranks) {
    if (r == 0) throw ValidationError("ranks are 1-based");
    total += 1.0 / static_cast<double>(r);
  }
  return total / static_cast<double>(ranks.size());
}

std::size_t median_rank(std::span<const std::size_t> ranks) {
  require_non_empty(ranks);
  std::vector<std::size_t> sorted(ranks.begin(), ranks.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted[(sorted.size() - 1) / 2];
}

std::vector<double> fractional_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("spearman: length mismatch");
  if (a.size() < 2) throw ValidationError("spearman: need at least two values");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(a) || constant(b)) return std::nullopt;
  const auto ra = fractional_ranks(a);
  const auto rb = fractional_ranks(b);
  return pearson(ra, rb);
}

void EvalReport::finalize() {
  n_items = items.size();
  n_skipped = 0;
  std::vector<std::size_t> ranks;
  double sum = 0.0;
  std::size_t evaluated = 0;
  for (const auto& item : items) {
    if (item.skipped) {
      ++n_skipped;
      continue;
    }
    ++evaluated;
    if (protocol == "definitional") {
      ranks.push_back(item.rank);
    } else {
      sum += item.value;
    }
  }
  median_rank = 0;
  aggregate = 0.0;
  if (protocol == "definitional") {
    if (!ranks.empty()) {
      aggregate = mrr(ranks);
      median_rank = eval::median_rank(ranks);
    }
  } else if (evaluated > 0) {
    aggregate = sum / static_cast<double>(evaluated);
  }
}

void EvalReport::write_tsv(std::ostream& out) const {
  if (protocol == "definitional") {
    out << "id\tstatus\trank\treciprocal_rank\tnote\n";
    for (const auto& it : items) {
      out << it.id << '\t' << (it.skipped ? "skipped" : "ok") << '\t' << (it.skipped ? "" : std::to_string(it.rank))
          << '\t' << (it.skipped ? "" : fmt(it.value)) << '\t' << it.note << '\n';
    }
  } else {
    out << "id\tstatus\trho\tprobes_used\tprobes_dropped\tnote\n";
    for (const auto& it : items) {
      out << it.id << '\t' << (it.skipped ? "skipped" : "ok") << '\t' << (it.skipped ? "" : fmt(it.value)) << '\t'
          << it.probes_used << '\t' << it.probes_dropped << '\t' << it.note << '\n';
    }
  }
}

std::string EvalReport::summary() const {
  std::string s = "protocol=" + protocol + " learner=" + std::string(to_string(learner)) +
                  " items=" + std::to_string(n_items) + " skipped=" + std::to_string(n_skipped);
  if (protocol == "definitional") {
    s += " mrr=" + fmt(aggregate) + " median_rank=" + std::to_string(median_rank);
  } else {
    s += " mean_rho=" + fmt(aggregate);
  }
  return s;
}

EvalReport eval_definitional(const SemanticSpace& space, const std::vector<data::DefinitionalInstance>& instances,
                             const EvalOptions& options) {
  options.config.validate();
  const std::size_t base_size = space.size();
  EvalReport report;
  report.protocol = "definitional";
  report.learner = options.learner;
  report.items = run_items(space, instances, options.workers, [&](SemanticSpace& scratch, const auto& inst) {
    ItemResult r;
    r.id = inst.target;
    const std::string gold = inst.target + options.gold_suffix;
    if (!scratch.vocab().contains(inst.target)) {
      r.skipped = true;
      r.note = "target not in vocabulary";
      return r;
    }
    if (scratch.vocab().contains(gold)) {
      r.skipped = true;
      r.note = "gold label '" + gold + "' already in vocabulary";
      return r;
    }
    const std::vector<Sentence> sentences{inst.sentence};
    scratch.relabel(inst.target, gold);
    try {
      const auto vec = learn(scratch, sentences, options, inst.target, content_seed(options.config.seed, inst.target, sentences));
      r.rank = rank_of(scratch, vec, gold, WordSet{inst.target});
      r.value = 1.0 / static_cast<double>(r.rank);
    } catch (const DataError& e) {
      r.skipped = true;
      r.note = e.what();
    }
    restore(scratch, space, options.learner, base_size);
    if (options.learner != Learner::vanilla) scratch.relabel(gold, inst.target);
    return r;
  });
  report.finalize();
  return report;
}

EvalReport eval_chimeras(const SemanticSpace& space, const std::vector<data::ChimeraTrial>& trials,
                         const EvalOptions& options) {
  options.config.validate();
  const std::size_t base_size = space.size();
  const std::string nonce_word(kSlot);
  EvalReport report;
  report.protocol = "chimeras";
  report.learner = options.learner;
  report.items = run_items(space, trials, options.workers, [&](SemanticSpace& scratch, const auto& trial) {
    ItemResult r;
    r.id = trial.id;
    try {
      const auto vec = learn(scratch, trial.sentences, options, nonce_word,
                             content_seed(options.config.seed, trial.id, trial.sentences));
      std::vector<double> system;
      std::vector<double> human;
      for (std::size_t p = 0; p < trial.probes.size(); ++p) {
        const auto id = scratch.vocab().find(trial.probes[p]);
        if (!id || trial.probes[p] == nonce_word) {
          ++r.probes_dropped;
          continue;
        }
        system.push_back(cosine(vec, scratch.input(*id)));
        human.push_back(trial.human_ratings[p]);
      }
      r.probes_used = system.size();
      if (system.size() < 2) {
        r.skipped = true;
        r.note = "fewer than two usable probes";
      } else if (auto rho = spearman(system, human)) {
        r.value = *rho;
      } else {
        r.skipped = true;
        r.note = "correlation undefined (constant similarities or ratings)";
      }
    } catch (const DataError& e) {
      r.skipped = true;
      r.note = e.what();
    }
    restore(scratch, space, options.learner, base_size);
    return r;
  });
  report.finalize();
  return report;
}

MenResult eval_men(const SemanticSpace& space, const std::vector<data::SimilarityPair>& pairs) {
  MenResult result;
  std::vector<double> system;
  std::vector<double> human;
  for (const auto& p : pairs) {
    const auto a = space.vocab().find(p.word1);
    const auto b = space.vocab().find(p.word2);
    if (!a || !b) {
      ++result.dropped;
      continue;
    }
    system.push_back(cosine(space.input(*a), space.input(*b)));
    human.push_back(p.score);
  }
  result.used = system.size();
  if (result.used < 2) throw DataError("similarity evaluation needs at least two in-vocabulary pairs");
  const auto rho = spearman(system, human);
  if (!rho) throw DataError("similarity correlation undefined (constant list)");
  result.rho = *rho;
  return result;
}

std::size_t ParamGrid::size() const {
  if (axes.empty()) return 0;
  std::size_t n = 1;
  for (const auto& [name, values] : axes) n *= values.size();
  return n;
}

std::vector<std::pair<std::string, double>> ParamGrid::cell(std::size_t index) const {
  std::vector<std::pair<std::string, double>> out(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    const auto& [name, values] = axes[a];
    out[a] = {name, values[index % values.size()]};
    index /= values.size();
  }
  return out;
}

ParamGrid parse_grid(std::istream& in) {
  ParamGrid grid;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError("grid line " + std::to_string(number) + ": expected name<TAB>values");
    std::string name = line.substr(0, tab);
    nonce::NonceConfig probe;
    apply_param(probe, name, 1.0);  // rejects unknown names early
    std::vector<double> values;
    std::string_view rest(line);
    rest.remove_prefix(tab + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
      const auto comma = rest.find(',', start);
      const auto part = rest.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      const auto v = parse_number(part);
      if (!v) throw DataError("grid line " + std::to_string(number) + ": bad value '" + std::string(part) + "'");
      values.push_back(*v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    grid.axes.emplace_back(std::move(name), std::move(values));
  }
  if (grid.axes.empty()) throw DataError("grid is empty");
  return grid;
}

ParamGrid load_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open grid '" + path.string() + "'");
  return parse_grid(in);
}

void apply_param(nonce::NonceConfig& config, std::string_view name, double value) {
  auto as_int = [&] {
    if (value != std::floor(value)) throw ValidationError("parameter '" + std::string(name) + "' must be an integer");
    return static_cast<int>(value);
  };
  if (name == "alpha") {
    config.alpha0 = value;
  } else if (name == "lambda") {
    config.lambda = value;
  } else if (name == "window") {
    config.window0 = as_int();
  } else if (name == "window_decay") {
    config.window_decay = as_int();
  } else if (name == "window_min") {
    config.window_min = as_int();
  } else if (name == "neg") {
    config.negatives = as_int();
  } else if (name == "epochs") {
    config.epochs = as_int();
  } else if (name == "sample") {
    config.subsample_mult0 = value;
  } else if (name == "sample_factor") {
    config.subsample_factor = value;
  } else {
    throw ValidationError("unknown grid parameter '" + std::string(name) + "'");
  }
}

void GridResult::write_tsv(std::ostream& out) const {
  if (rows.empty()) return;
  for (const auto& [name, value] : rows.front().assignment) out << name << '\t';
  out << "score\tmedian_rank\tskipped\tbest\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [name, value] : rows[i].assignment) out << fmt(value) << '\t';
    out << fmt(rows[i].score) << '\t' << rows[i].median_rank << '\t' << rows[i].n_skipped << '\t'
        << (i == best ? "*" : "") << '\n';
  }
}

GridResult grid_search(const SemanticSpace& space, const std::vector<data::DefinitionalInstance>& train,
                       const ParamGrid& grid, const EvalOptions& base) {
  return sweep<data::DefinitionalInstance>(
      grid, base, [&](const EvalOptions& options) { return eval_definitional(space, train, options); });
}

GridResult grid_search(const SemanticSpace& space, const std::vector<data::ChimeraTrial>& train,
                       const ParamGrid& grid, const EvalOptions& base) {
  return sweep<data::ChimeraTrial>(grid, base,
                                   [&](const EvalOptions& options) { return eval_chimeras(space, train, options); });
}

}  // namespace n2v::eval
