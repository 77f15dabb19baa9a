#include "commands.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "manifest.hpp"
#include "n2v/corpus.hpp"
#include "n2v/data.hpp"
#include "n2v/error.hpp"
#include "n2v/eval.hpp"
#include "n2v/nonce.hpp"
#include "n2v/sgns.hpp"
#include "n2v/space_io.hpp"
#include "n2v/synthetic.hpp"

namespace n2v::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const std::vector<std::string> kFormats{"binary", "text"};

struct SpaceFlags {
  std::string path;
  std::string format = "binary";

  void add(CLI::App& sub) {
    sub.add_option("--space", path, "Background space (also $N2V_SPACE)")->envname("N2V_SPACE")->required();
    sub.add_option("--format", format, "Vector file format")->check(CLI::IsMember(kFormats))->capture_default_str();
  }
  SemanticSpace load() const { return load_space(path, parse_vector_format(format)); }
};

struct NonceFlags {
  nonce::NonceConfig config;
  std::string lambda = "1/70";

  void add(CLI::App& sub) {
    sub.add_option("--alpha", config.alpha0, "Initial learning rate")->capture_default_str();
    sub.add_option("--lambda", lambda, "Learning-rate decay per trained pair, decimal or fraction")
        ->capture_default_str();
    sub.add_option("--window", config.window0, "Half-window for the first sentence")->capture_default_str();
    sub.add_option("--window-decay", config.window_decay, "Half-window shrink per sentence")->capture_default_str();
    sub.add_option("--window-min", config.window_min, "Half-window floor")->capture_default_str();
    sub.add_option("--neg", config.negatives, "Negative samples per pair")->capture_default_str();
    sub.add_option("--epochs", config.epochs, "Passes over the sentences")->capture_default_str();
    sub.add_option("--sample", config.subsample_mult0, "Multiplier on the background subsampling threshold")
        ->capture_default_str();
    sub.add_option("--sample-factor", config.subsample_factor, "Threshold divisor per sentence")
        ->capture_default_str();
    sub.add_option("--background-sample", config.background_subsample_t,
                   "Subsampling threshold the background space was trained with")
        ->capture_default_str();
    sub.add_option("--seed", config.seed, "Random seed")->capture_default_str();
  }

  nonce::NonceConfig resolve() const {
    nonce::NonceConfig c = config;
    const auto l = eval::parse_number(lambda);
    if (!l) throw ValidationError("--lambda: cannot parse '" + lambda + "'");
    c.lambda = *l;
    c.validate();
    return c;
  }
};

ordered_json to_json(const nonce::NonceConfig& c) {
  return {{"alpha", c.alpha0},
          {"lambda", c.lambda},
          {"window", c.window0},
          {"window_decay", c.window_decay},
          {"window_min", c.window_min},
          {"neg", c.negatives},
          {"epochs", c.epochs},
          {"sample", c.subsample_mult0},
          {"sample_factor", c.subsample_factor},
          {"background_sample", c.background_subsample_t},
          {"seed", c.seed}};
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

fs::path default_manifest(const std::string& explicit_path, const std::string& out, const std::string& command) {
  if (!explicit_path.empty()) return explicit_path;
  if (!out.empty()) return out + ".manifest.json";
  return "n2v-" + command + ".manifest.json";
}

// Keeps the valid records of a parsed file; rejected lines are reported on
// stderr, or fail the run under --strict.
template <typename T>
std::vector<T> accept(data::Parsed<T> parsed, const std::string& source, bool strict, Manifest& manifest,
                      const std::string& role) {
  if (!parsed.ok()) {
    const auto message = data::describe_errors(parsed.errors, source);
    if (strict) throw DataError(message);
    std::cerr << "warning: " << message << '\n';
  }
  if (parsed.records.empty()) throw DataError(source + ": no usable records");
  manifest.set_result(role + "_records", parsed.records.size());
  manifest.set_result(role + "_rejected", parsed.errors.size());
  return std::move(parsed.records);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void close_output(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

WordSet stopwords_from(const std::string& path, Manifest& manifest) {
  if (path.empty()) return {};
  manifest.add_input("stopwords", path);
  return data::load_stopwords(path);
}

// Writes the report TSV to `out` (or stdout) and its summary line to stdout
// (or stderr when the TSV already occupies stdout).
void emit_report(const eval::EvalReport& report, const std::string& out, Manifest& manifest, const std::string& role) {
  if (out.empty()) {
    report.write_tsv(std::cout);
    std::cerr << report.summary() << '\n';
  } else {
    auto file = open_output(out);
    report.write_tsv(file);
    close_output(file, out);
    manifest.add_output(role, out);
    std::cout << report.summary() << '\n';
  }
  manifest.set_result(role, {{"aggregate", report.aggregate},
                             {"median_rank", report.median_rank},
                             {"n_items", report.n_items},
                             {"n_skipped", report.n_skipped}});
}

// ---------------------------------------------------------------- train

Command make_train(CLI::App& app) {
  struct Opts {
    std::string corpus, out, format = "binary", manifest;
    sgns::TrainConfig config;
    bool keep_case = false;
    bool quiet = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("train", "Train a background skip-gram space");
  sub->add_option("--corpus", o->corpus, "Corpus, one sentence per line")->required();
  sub->add_option("--out", o->out, "Output path; .out and .vocab sidecars are written next to it")->required();
  sub->add_option("--format", o->format, "Vector file format")->check(CLI::IsMember(kFormats))->capture_default_str();
  sub->add_option("--dim", o->config.dim, "Vector dimensionality")->capture_default_str();
  sub->add_option("--window", o->config.window, "Maximum half-window")->capture_default_str();
  sub->add_option("--neg", o->config.negatives, "Negative samples per pair")->capture_default_str();
  sub->add_option("--sample", o->config.subsample_t, "Subsampling threshold")->capture_default_str();
  sub->add_option("--epochs", o->config.epochs, "Passes over the corpus")->capture_default_str();
  sub->add_option("--min-count", o->config.min_count, "Minimum word count")->capture_default_str();
  sub->add_option("--alpha", o->config.alpha0, "Initial learning rate")->capture_default_str();
  sub->add_option("--min-alpha", o->config.alpha_min, "Final learning rate")->capture_default_str();
  sub->add_option("--seed", o->config.seed, "Random seed")->capture_default_str();
  sub->add_option("--workers", o->config.workers, "Training threads")->capture_default_str();
  sub->add_flag("--keep-case", o->keep_case, "Do not lowercase the corpus");
  sub->add_flag("--quiet", o->quiet, "No progress output");
  sub->add_option("--manifest", o->manifest, "Manifest path (default: <out>.manifest.json)");

  return {sub, [o] {
            const auto& c = o->config;
            c.validate();
            const auto format = parse_vector_format(o->format);
            if (!fs::is_regular_file(o->corpus)) throw IoError("cannot read corpus " + o->corpus);
            Manifest manifest("train");
            manifest.config() = {{"dim", c.dim},         {"window", c.window},       {"neg", c.negatives},
                                 {"sample", c.subsample_t}, {"epochs", c.epochs},     {"min_count", c.min_count},
                                 {"alpha", c.alpha0},      {"min_alpha", c.alpha_min}, {"noise_exponent", c.noise_exponent},
                                 {"workers", c.workers},   {"lowercase", !o->keep_case}, {"format", o->format}};
            manifest.set_seed(c.seed);
            manifest.add_input("corpus", o->corpus);

            FileCorpus corpus(o->corpus, !o->keep_case);
            sgns::ProgressCallback progress;
            if (!o->quiet) {
              progress = [](const sgns::TrainProgress& p) {
                std::fprintf(stderr, "epoch %d  %.1fM / %.1fM words  alpha %.6f\n", p.epoch + 1,
                             static_cast<double>(p.words_processed) / 1e6, static_cast<double>(p.words_total) / 1e6,
                             p.alpha);
              };
            }
            const auto space = sgns::train_background(corpus, c, progress);
            save_space(space, o->out, format);

            manifest.add_output("vectors", o->out);
            manifest.add_output("output_vectors", o->out + ".out");
            manifest.add_output("vocab", o->out + ".vocab");
            manifest.set_result("vocab_size", space.size());
            manifest.set_result("corpus_tokens", space.vocab().total_tokens());
            manifest.write(default_manifest(o->manifest, o->out, "train"));
            if (!o->quiet) std::cerr << "vocabulary " << space.size() << " words, saved " << o->out << '\n';
          }};
}

// ---------------------------------------------------------------- learn

std::vector<Sentence> read_sentences(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<Sentence> out;
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = tokenize(line);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  if (out.empty()) throw DataError(path + ": no sentences");
  if (nonce::count_slots(out) == 0) throw DataError(path + ": no slot token '" + std::string(kSlot) + "' found");
  return out;
}

Command make_learn(CLI::App& app) {
  struct Opts {
    SpaceFlags space;
    NonceFlags nonce;
    std::string sentences, mode = "nonce2vec", stopwords, manifest;
    std::size_t top = 10;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("learn", "Learn a vector for the slot token from a few sentences");
  o->space.add(*sub);
  sub->add_option("--sentences", o->sentences, "Slotted sentences, one per line")->required();
  sub->add_option("--mode", o->mode, "Learner")
      ->check(CLI::IsMember({"nonce2vec", "sum", "vanilla"}))
      ->capture_default_str();
  sub->add_option("--stopwords", o->stopwords, "Stopword list for the sum learner");
  sub->add_option("--top", o->top, "Neighbors to print")->capture_default_str();
  o->nonce.add(*sub);
  sub->add_option("--manifest", o->manifest, "Manifest path (default: n2v-learn.manifest.json)");

  return {sub, [o] {
            const auto config = o->nonce.resolve();
            const auto learner = eval::parse_learner(o->mode);
            Manifest manifest("learn");
            manifest.config() = to_json(config);
            manifest.config()["mode"] = o->mode;
            manifest.config()["format"] = o->space.format;
            manifest.set_seed(config.seed);
            const auto sentences = read_sentences(o->sentences);
            manifest.add_input("sentences", o->sentences);
            manifest.add_input("space", o->space.path);
            const auto stop = stopwords_from(o->stopwords, manifest);
            auto space = o->space.load();
            std::vector<float> vec;
            WordSet exclude;
            switch (learner) {
              case eval::Learner::sum:
                vec = nonce::sum_baseline(space, sentences, stop);
                break;
              case eval::Learner::nonce2vec:
              case eval::Learner::vanilla: {
                const auto mode = learner == eval::Learner::vanilla ? nonce::Mode::vanilla : nonce::Mode::nonce2vec;
                vec = nonce::learn_nonce(space, sentences, config, mode).vector;
                exclude.insert(std::string(kSlot));
                break;
              }
            }

            std::string text = format_vector_record(kSlot, vec) + '\n';
            for (const auto& n : nearest_neighbors(space, vec, o->top, exclude).items) {
              text += n.word + '\t' + format_double(n.similarity) + '\n';
            }
            std::cout << text << std::flush;
            manifest.set_result("stdout_fnv1a64", text_digest(text));
            manifest.write(default_manifest(o->manifest, "", "learn"));
          }};
}

// ---------------------------------------------------------------- eval-def

struct EvalFlags {
  SpaceFlags space;
  NonceFlags nonce;
  std::string learner = "nonce2vec", stopwords, out, manifest;
  int workers = 1;
  bool strict = false;

  void add(CLI::App& sub) {
    space.add(sub);
    sub.add_option("--learner", learner, "Learner")
        ->check(CLI::IsMember({"nonce2vec", "sum", "vanilla"}))
        ->capture_default_str();
    sub.add_option("--stopwords", stopwords, "Stopword list for the sum learner");
    sub.add_option("--workers", workers, "Parallel item evaluations")->capture_default_str();
    sub.add_flag("--strict", strict, "Fail on malformed data lines instead of skipping them");
    nonce.add(sub);
  }

  eval::EvalOptions options(Manifest& manifest) const {
    if (workers < 1) throw ValidationError("--workers must be >= 1");
    eval::EvalOptions opt;
    opt.learner = eval::parse_learner(learner);
    opt.config = nonce.resolve();
    opt.workers = workers;
    opt.stopwords = stopwords_from(stopwords, manifest);
    manifest.config() = to_json(opt.config);
    manifest.config()["learner"] = learner;
    manifest.config()["workers"] = workers;
    manifest.config()["format"] = space.format;
    manifest.set_seed(opt.config.seed);
    manifest.add_input("space", space.path);
    return opt;
  }
};

Command make_eval_def(CLI::App& app) {
  struct Opts {
    EvalFlags eval;
    std::string data;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("eval-def", "Definitional evaluation: MRR and median rank of the gold vector");
  sub->add_option("--data", o->data, "target<TAB>slotted definition per line")->required();
  sub->add_option("--out", o->eval.out, "Per-item TSV (default: stdout)");
  sub->add_option("--manifest", o->eval.manifest, "Manifest path (default: <out>.manifest.json)");
  o->eval.add(*sub);

  return {sub, [o] {
            Manifest manifest("eval-def");
            const auto options = o->eval.options(manifest);
            manifest.add_input("data", o->data);
            const auto items = accept(data::load_definitions(o->data), o->data, o->eval.strict, manifest, "data");
            const auto space = o->eval.space.load();
            const auto report = eval::eval_definitional(space, items, options);
            emit_report(report, o->eval.out, manifest, "report");
            manifest.write(default_manifest(o->eval.manifest, o->eval.out, "eval-def"));
          }};
}

// ---------------------------------------------------------------- eval-chimera

Command make_eval_chimera(CLI::App& app) {
  struct Opts {
    EvalFlags eval;
    std::vector<std::string> data;
    std::vector<std::size_t> n{2};
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("eval-chimera", "Chimera evaluation: mean Spearman against human probe ratings");
  sub->add_option("--data", o->data, "Trial file per --n value")->required();
  sub->add_option("--n", o->n, "Sentences per trial, one value per --data file")->check(CLI::IsMember({2, 4, 6}));
  sub->add_option("--out", o->eval.out, "Report prefix; writes <out>.L<n>.tsv (default: stdout)");
  sub->add_option("--manifest", o->eval.manifest, "Manifest path (default: <out>.manifest.json)");
  o->eval.add(*sub);

  return {sub, [o] {
            if (o->data.size() != o->n.size()) {
              throw ValidationError("--data and --n must list the same number of values");
            }
            Manifest manifest("eval-chimera");
            const auto options = o->eval.options(manifest);
            const auto space = o->eval.space.load();
            for (std::size_t i = 0; i < o->n.size(); ++i) {
              const std::string tag = "L" + std::to_string(o->n[i]);
              manifest.add_input("data_" + tag, o->data[i]);
              const auto trials =
                  accept(data::load_chimeras(o->data[i], o->n[i]), o->data[i], o->eval.strict, manifest, "data_" + tag);
              const auto report = eval::eval_chimeras(space, trials, options);
              const std::string out = o->eval.out.empty() ? "" : o->eval.out + "." + tag + ".tsv";
              if (!out.empty()) std::cout << tag << ' ';
              emit_report(report, out, manifest, "report_" + tag);
            }
            manifest.write(default_manifest(o->eval.manifest, o->eval.out, "eval-chimera"));
          }};
}

// ---------------------------------------------------------------- eval-men

Command make_eval_men(CLI::App& app) {
  struct Opts {
    SpaceFlags space;
    std::string data, manifest;
    bool strict = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("eval-men", "Spearman correlation of cosine similarity with human pair ratings");
  o->space.add(*sub);
  sub->add_option("--data", o->data, "word1 word2 score per line")->required();
  sub->add_flag("--strict", o->strict, "Fail on malformed data lines instead of skipping them");
  sub->add_option("--manifest", o->manifest, "Manifest path (default: n2v-eval-men.manifest.json)");

  return {sub, [o] {
            Manifest manifest("eval-men");
            manifest.config() = {{"format", o->space.format}};
            manifest.add_input("space", o->space.path);
            manifest.add_input("data", o->data);
            const auto pairs = accept(data::load_pairs(o->data), o->data, o->strict, manifest, "data");
            const auto space = o->space.load();
            const auto r = eval::eval_men(space, pairs);
            std::cout << "rho=" << format_double(r.rho) << " used=" << r.used << " dropped=" << r.dropped << '\n';
            manifest.set_result("rho", r.rho);
            manifest.set_result("used", r.used);
            manifest.set_result("dropped", r.dropped);
            manifest.write(default_manifest(o->manifest, "", "eval-men"));
          }};
}

// ---------------------------------------------------------------- tune

Command make_tune(CLI::App& app) {
  struct Opts {
    EvalFlags eval;
    std::string data, grid, protocol = "definitional";
    std::size_t n = 2;
    std::size_t train_size = 0;
    std::uint64_t split_seed = 1;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("tune", "Grid search over nonce hyperparameters on a training split");
  sub->add_option("--data", o->data, "Dataset for the chosen protocol")->required();
  sub->add_option("--grid", o->grid, "name<TAB>v1,v2,... per line")->required();
  sub->add_option("--protocol", o->protocol, "Evaluation protocol")
      ->check(CLI::IsMember({"definitional", "chimeras"}))
      ->capture_default_str();
  sub->add_option("--n", o->n, "Sentences per chimera trial")->check(CLI::IsMember({2, 4, 6}))->capture_default_str();
  sub->add_option("--train-size", o->train_size, "Shuffle and keep this many items for tuning (0: use all)")
      ->capture_default_str();
  sub->add_option("--split-seed", o->split_seed, "Seed of the train/test shuffle")->capture_default_str();
  sub->add_option("--out", o->eval.out, "Results TSV (default: stdout)");
  sub->add_option("--manifest", o->eval.manifest, "Manifest path (default: <out>.manifest.json)");
  o->eval.add(*sub);

  return {sub, [o] {
            Manifest manifest("tune");
            const auto options = o->eval.options(manifest);
            manifest.config()["protocol"] = o->protocol;
            manifest.config()["train_size"] = o->train_size;
            manifest.config()["split_seed"] = o->split_seed;
            manifest.add_input("data", o->data);
            manifest.add_input("grid", o->grid);
            const auto grid = eval::load_grid(o->grid);

            auto split = [&](auto items) {
              if (o->train_size == 0) return items;
              if (o->train_size > items.size()) throw ValidationError("--train-size exceeds the dataset");
              return data::split_train_test(std::move(items), o->train_size, o->split_seed).first;
            };
            const auto space = o->eval.space.load();
            eval::GridResult result;
            if (o->protocol == "definitional") {
              auto items = accept(data::load_definitions(o->data), o->data, o->eval.strict, manifest, "data");
              manifest.config()["n"] = nullptr;
              result = eval::grid_search(space, split(std::move(items)), grid, options);
            } else {
              auto trials = accept(data::load_chimeras(o->data, o->n), o->data, o->eval.strict, manifest, "data");
              manifest.config()["n"] = o->n;
              result = eval::grid_search(space, split(std::move(trials)), grid, options);
            }

            std::ostringstream best;
            for (const auto& [name, value] : result.rows[result.best].assignment) {
              best << name << '=' << format_double(value) << ' ';
            }
            best << "score=" << format_double(result.rows[result.best].score);
            if (o->eval.out.empty()) {
              result.write_tsv(std::cout);
              std::cerr << "best " << best.str() << '\n';
            } else {
              auto file = open_output(o->eval.out);
              result.write_tsv(file);
              close_output(file, o->eval.out);
              manifest.add_output("results", o->eval.out);
              std::cout << "best " << best.str() << '\n';
            }
            manifest.set_result("cells", result.rows.size());
            manifest.set_result("best_cell", result.best);
            manifest.set_result("best", to_json(result.rows[result.best].config));
            manifest.write(default_manifest(o->eval.manifest, o->eval.out, "tune"));
          }};
}

// ---------------------------------------------------------------- synth

Command make_synth(CLI::App& app) {
  struct Opts {
    std::string dir;
    synthetic::WorldConfig world;
    std::size_t tokens = 15'000'000;
    std::size_t definitions = 300;
    std::size_t chimeras = 110;
    std::size_t pairs = 1000;
    std::uint64_t seed = 11;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("synth", "Generate a corpus and evaluation sets from a language with planted semantics");
  sub->add_option("--dir", o->dir, "Output directory")->required();
  sub->add_option("--tokens", o->tokens, "Corpus size in tokens")->capture_default_str();
  sub->add_option("--definitions", o->definitions, "Definitional items")->capture_default_str();
  sub->add_option("--chimeras", o->chimeras, "Chimera trials per sentence count")->capture_default_str();
  sub->add_option("--pairs", o->pairs, "Similarity pairs")->capture_default_str();
  sub->add_option("--domains", o->world.domains, "Domains")->capture_default_str();
  sub->add_option("--topics", o->world.topics_per_domain, "Topics per domain")->capture_default_str();
  sub->add_option("--topic-words", o->world.words_per_topic, "Words per topic")->capture_default_str();
  sub->add_option("--world-seed", o->world.seed, "Seed of the planted lexicon")->capture_default_str();
  sub->add_option("--seed", o->seed, "Seed of the sampled text and datasets")->capture_default_str();

  return {sub, [o] {
            const synthetic::World world(o->world);
            const fs::path dir(o->dir);
            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
            Manifest manifest("synth");
            manifest.config() = {{"tokens", o->tokens},
                                 {"definitions", o->definitions},
                                 {"chimeras", o->chimeras},
                                 {"pairs", o->pairs},
                                 {"domains", o->world.domains},
                                 {"topics", o->world.topics_per_domain},
                                 {"topic_words", o->world.words_per_topic},
                                 {"world_seed", o->world.seed}};
            manifest.set_seed(o->seed);

            auto emit = [&](const std::string& role, const std::string& name, const auto& write) {
              const fs::path path = dir / name;
              auto out = open_output(path);
              write(out);
              close_output(out, path);
              manifest.add_output(role, path);
            };
            Rng rng(mix_seed(o->seed, 1));
            emit("corpus", "corpus.txt", [&](std::ostream& out) { world.write_corpus(out, o->tokens, o->seed); });
            emit("definitions", "definitions.tsv",
                 [&](std::ostream& out) { data::write_definitions(out, world.definitional_set(o->definitions, rng)); });
            for (std::size_t n : {2, 4, 6}) {
              emit("chimeras_L" + std::to_string(n), "chimeras.l" + std::to_string(n) + ".tsv",
                   [&](std::ostream& out) { data::write_chimeras(out, world.chimera_set(o->chimeras, n, rng)); });
            }
            emit("pairs", "pairs.tsv", [&](std::ostream& out) { data::write_pairs(out, world.similarity_pairs(o->pairs, rng)); });
            emit("stopwords", "stopwords.txt", [&](std::ostream& out) {
              for (const auto& w : world.function_words()) out << w << '\n';
              out << ".\n";
            });
            manifest.write(dir / "synth.manifest.json");
          }};
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app) {
  return {make_train(app), make_learn(app),   make_eval_def(app), make_eval_chimera(app),
          make_eval_men(app), make_tune(app), make_synth(app)};
}

}  // namespace n2v::cli
