#include <gtest/gtest.h>

#include <algorithm>
#include <memory>

#include "test_support.hpp"

namespace n2v {
namespace {

using testing::read_file;
using testing::run_command;
using testing::TempDir;
using testing::write_file;

const std::string kCli = N2V_CLI_PATH;

// One small synthetic dataset and background space shared by every test.
class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = std::make_unique<TempDir>();
    ASSERT_EQ(n2v("synth --dir " + path("data") + " --tokens 200000 --domains 4 --topics 3 --topic-words 20"
                  " --definitions 30 --chimeras 8 --pairs 100")
                  .exit_code,
              0);
    ASSERT_EQ(train("space.bin").exit_code, 0);
  }
  static void TearDownTestSuite() { dir_.reset(); }

  static std::string path(const std::string& name) { return (*dir_ / name).string(); }

  static testing::CommandResult n2v(const std::string& args) {
    return run_command(kCli + " " + args + " 2>" + path("stderr.txt"));
  }

  static testing::CommandResult train(const std::string& out) {
    return n2v("train --corpus " + path("data/corpus.txt") + " --out " + path(out) +
               " --dim 16 --min-count 5 --epochs 1 --quiet");
  }

  static std::string space() { return " --space " + path("space.bin") + " "; }

  static inline std::unique_ptr<TempDir> dir_;
};

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(n2v("--help").exit_code, 0);
  EXPECT_EQ(n2v("").exit_code, 2);
  EXPECT_EQ(n2v("frobnicate").exit_code, 2);
  EXPECT_EQ(n2v("train --corpus " + path("data/corpus.txt") + " --out " + path("x.bin") + " --dim 0").exit_code, 2);
  EXPECT_EQ(n2v("train --corpus /nonexistent/corpus.txt --out " + path("x.bin")).exit_code, 1);
  EXPECT_EQ(n2v("eval-def --data " + path("data/definitions.tsv") + " --space /nonexistent.bin").exit_code, 1);

  write_file(*dir_ / "empty.txt", "");
  EXPECT_EQ(n2v("learn" + space() + "--sentences " + path("empty.txt") + " --manifest " + path("m.json")).exit_code, 3);
  write_file(*dir_ / "noslot.txt", "the cat sat on the mat\n");
  EXPECT_EQ(n2v("learn" + space() + "--sentences " + path("noslot.txt") + " --manifest " + path("m.json")).exit_code,
            3);
  write_file(*dir_ / "truncated.txt", "3 16\nfoo 1 2\n");
  EXPECT_EQ(n2v("eval-men --space " + path("truncated.txt") + " --format text --data " + path("data/pairs.tsv") +
                " --manifest " + path("m.json"))
                .exit_code,
            3);
  EXPECT_NE(read_file(*dir_ / "stderr.txt").find("record"), std::string::npos);
  EXPECT_EQ(n2v("learn" + space() + "--sentences " + path("noslot.txt") + " --lambda 1/x").exit_code, 2);
}

TEST_F(Cli, TrainIsByteReproducible) {
  ASSERT_EQ(train("again.bin").exit_code, 0);
  for (const char* suffix : {"", ".out", ".vocab"}) {
    EXPECT_EQ(read_file(path("space.bin") + suffix), read_file(path("again.bin") + suffix)) << suffix;
  }
  const auto manifest = read_file(path("space.bin.manifest.json"));
  EXPECT_NE(manifest.find("\"seed\""), std::string::npos);
  EXPECT_NE(manifest.find("fnv1a64"), std::string::npos);
}

TEST_F(Cli, LearnPrintsVectorThenNeighbors) {
  // A corpus line with its first token replaced by the slot.
  const auto first = read_file(path("data/corpus.txt"));
  std::string line = first.substr(0, first.find('\n'));
  line.replace(0, line.find(' '), "___");
  write_file(*dir_ / "sent.txt", line + "\n");
  for (const char* mode : {"nonce2vec", "sum", "vanilla"}) {
    const std::string args = "learn" + space() + "--sentences " + path("sent.txt") + " --top 5 --mode " + mode +
                             " --manifest " + path("learn.json");
    const auto a = n2v(args);
    const auto b = n2v(args);
    ASSERT_EQ(a.exit_code, 0) << mode << read_file(*dir_ / "stderr.txt");
    EXPECT_EQ(a.output, b.output) << mode;
    EXPECT_EQ(a.output.rfind("___ ", 0), 0u);
    EXPECT_EQ(std::count(a.output.begin(), a.output.end(), '\n'), 6);
  }
}

TEST_F(Cli, EvalDefinitionalReproducibleAcrossWorkers) {
  const std::string base = "eval-def" + space() + "--data " + path("data/definitions.tsv");
  ASSERT_EQ(n2v(base + " --out " + path("d1.tsv")).exit_code, 0);
  ASSERT_EQ(n2v(base + " --out " + path("d2.tsv") + " --workers 3").exit_code, 0);
  const auto report = read_file(path("d1.tsv"));
  EXPECT_EQ(report, read_file(path("d2.tsv")));
  EXPECT_EQ(report.rfind("id\tstatus\trank\treciprocal_rank\tnote\n", 0), 0u);
  EXPECT_EQ(std::count(report.begin(), report.end(), '\n'), 31);
  const auto summary = n2v(base + " --out " + path("d3.tsv") + " --learner sum --stopwords " +
                           path("data/stopwords.txt"));
  EXPECT_EQ(summary.output.rfind("protocol=definitional learner=sum items=30", 0), 0u) << summary.output;
  EXPECT_NE(read_file(path("d1.tsv.manifest.json")).find("\"report\""), std::string::npos);
}

TEST_F(Cli, EvalChimeraWritesOneReportPerSentenceCount) {
  const std::string args = "eval-chimera" + space() + "--data " + path("data/chimeras.l2.tsv") + " " +
                           path("data/chimeras.l4.tsv") + " --n 2 4 --out " + path("chim");
  const auto a = n2v(args);
  ASSERT_EQ(a.exit_code, 0) << read_file(*dir_ / "stderr.txt");
  const auto l2 = read_file(path("chim.L2.tsv"));
  const auto l4 = read_file(path("chim.L4.tsv"));
  ASSERT_EQ(n2v(args).exit_code, 0);
  EXPECT_EQ(l2, read_file(path("chim.L2.tsv")));
  EXPECT_EQ(l4, read_file(path("chim.L4.tsv")));
  EXPECT_EQ(l2.rfind("id\tstatus\trho\tprobes_used\tprobes_dropped\tnote\n", 0), 0u);
  EXPECT_NE(a.output.find("mean_rho="), std::string::npos);
  EXPECT_EQ(n2v("eval-chimera" + space() + "--data " + path("data/chimeras.l2.tsv") + " --n 2 4").exit_code, 2);
}

TEST_F(Cli, EvalMenPrintsRho) {
  const auto a = n2v("eval-men" + space() + "--data " + path("data/pairs.tsv") + " --manifest " + path("men.json"));
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.output.rfind("rho=", 0), 0u);
  EXPECT_NE(a.output.find("used="), std::string::npos);
}

TEST_F(Cli, StrictModeRejectsMalformedLines) {
  write_file(*dir_ / "defs.tsv", read_file(path("data/definitions.tsv")) + "broken line\n");
  const std::string base = "eval-def" + space() + "--data " + path("defs.tsv") + " --learner sum --out " +
                           path("strict.tsv");
  EXPECT_EQ(n2v(base).exit_code, 0);
  EXPECT_NE(read_file(*dir_ / "stderr.txt").find("defs.tsv:31:"), std::string::npos);
  EXPECT_EQ(n2v(base + " --strict").exit_code, 3);
}

TEST_F(Cli, TuneSweepsEveryCell) {
  write_file(*dir_ / "grid.tsv", "alpha\t0.5,1\nlambda\t1/70,1/10\n");
  const std::string args = "tune" + space() + "--data " + path("data/definitions.tsv") + " --grid " +
                           path("grid.tsv") + " --train-size 20 --out " + path("tune.tsv");
  const auto a = n2v(args);
  ASSERT_EQ(a.exit_code, 0) << read_file(*dir_ / "stderr.txt");
  const auto results = read_file(path("tune.tsv"));
  EXPECT_EQ(std::count(results.begin(), results.end(), '\n'), 5);
  EXPECT_EQ(std::count(results.begin(), results.end(), '*'), 1);
  EXPECT_EQ(a.output.rfind("best alpha=", 0), 0u);
  ASSERT_EQ(n2v(args).exit_code, 0);
  EXPECT_EQ(results, read_file(path("tune.tsv")));
  EXPECT_EQ(n2v("tune" + space() + "--data " + path("data/definitions.tsv") + " --grid " + path("grid.tsv") +
                " --train-size 500")
                .exit_code,
            2);
}

TEST_F(Cli, SynthIsDeterministic) {
  const std::string args = " --tokens 20000 --domains 2 --topics 2 --topic-words 10 --definitions 5 --chimeras 3"
                           " --pairs 8";
  ASSERT_EQ(n2v("synth --dir " + path("s1") + args).exit_code, 0);
  ASSERT_EQ(n2v("synth --dir " + path("s2") + args).exit_code, 0);
  for (const char* f : {"corpus.txt", "definitions.tsv", "chimeras.l6.tsv", "pairs.tsv", "stopwords.txt"}) {
    EXPECT_EQ(read_file(path("s1/") + f), read_file(path("s2/") + f)) << f;
  }
}

}  // namespace
}  // namespace n2v
