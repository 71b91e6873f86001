#include "mabguess/cli/commands.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "mabguess/cli/csv.hpp"

namespace mabguess::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) row.push_back(f);
    rows.push_back(std::move(row));
  }
  return rows;
}

class Workspace : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("mabguess_cmd_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  // Three synthetic dictionaries plus a config composing `users` users.
  fs::path synth_experiment(std::uint64_t users, const std::string& extra = "") {
    SyntheticCorpusOptions opts;
    opts.words_per_dictionary = 200;
    opts.shared_words = 50;
    cmd_synth(opts, 5, dir_ / "lists");
    write("exp.ini", "[dictionaries]\nsynth1 = lists/synth1.txt\nsynth2 = lists/synth2.txt\n"
                     "synth3 = lists/synth3.txt\n[composition]\nproportions = 0.6, 0.3, 0.1\n"
                     "users = " + std::to_string(users) + "\nseed = 11\n" + extra);
    return dir_ / "exp.ini";
  }

  fs::path dir_;
};

TEST_F(Workspace, ComposeWritesPasswordsAndSidecar) {
  const auto cfg = load_config(synth_experiment(10000));
  cmd_compose(cfg);
  const std::string text = slurp(dir_ / "out/passwords.txt");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 10000);
  const std::string meta = slurp(dir_ / "out/passwords.meta");
  EXPECT_NE(meta.find("synth1 = 6000\n"), std::string::npos);
  EXPECT_NE(meta.find("synth2 = 3000\n"), std::string::npos);
  EXPECT_NE(meta.find("synth3 = 1000\n"), std::string::npos);
  EXPECT_NE(meta.find("seed = 11\n"), std::string::npos);
}

TEST_F(Workspace, ComposeSingleUserAndReproducible) {
  auto cfg = load_config(synth_experiment(1));
  cmd_compose(cfg);
  const std::string one = slurp(dir_ / "out/passwords.txt");
  EXPECT_EQ(std::count(one.begin(), one.end(), '\n'), 1);

  cfg = load_config(synth_experiment(500));
  cmd_compose(cfg);
  const std::string a = slurp(dir_ / "out/passwords.txt");
  cmd_compose(cfg);
  EXPECT_EQ(a, slurp(dir_ / "out/passwords.txt"));

  Overrides ov;
  ov.seed = 12;
  apply_overrides(cfg, ov, true);
  EXPECT_EQ(cfg.composition->seed, 12u);
  cmd_compose(cfg);
  EXPECT_NE(a, slurp(dir_ / "out/passwords.txt"));
}

TEST_F(Workspace, ComposedFileFeedsPasswordSetSection) {
  auto cfg = load_config(synth_experiment(300, "[attack]\nguesses = 15\nruns = 2\n"));
  cmd_compose(cfg);
  cmd_attack(cfg, 1);
  const std::string composed = slurp(dir_ / "out/trace.csv");

  cfg.composition.reset();
  cfg.password_set = dir_ / "out/passwords.txt";
  cfg.output = dir_ / "out2";
  cmd_attack(cfg, 1);
  EXPECT_EQ(composed, slurp(dir_ / "out2/trace.csv"));
}

TEST_F(Workspace, AttackSingleDictionaryMatchesBaseline) {
  write("d.txt", "a\t50\nb\t30\nc\t20\nd\t10\ne\t5\n");
  write("u.txt", "a\na\na\nb\nb\nc\nd\n");
  write("exp.ini", "[dictionaries]\nonly = d.txt\n[password_set]\npath = u.txt\n"
                   "[attack]\nguesses = 6\nruns = 1\n");
  const auto cfg = load_config(dir_ / "exp.ini");
  cmd_attack(cfg);
  cmd_baseline(cfg);
  const auto summary = read_csv(dir_ / "out/summary.csv");
  const auto baseline = read_csv(dir_ / "out/baseline.csv");
  ASSERT_EQ(summary.size(), 7u);
  ASSERT_EQ(baseline.size(), 7u);
  EXPECT_EQ(summary[0], (std::vector<std::string>{"guess_index", "mean_cumulative", "std_error",
                                                   "baseline"}));
  EXPECT_EQ(baseline[0], (std::vector<std::string>{"guess_index", "cumulative"}));
  const std::vector<std::string> expected = {"3", "5", "6", "7", "7", "7"};
  for (std::size_t j = 1; j < 7; ++j) {
    EXPECT_EQ(summary[j][1], expected[j - 1]) << j;
    EXPECT_EQ(summary[j][3], expected[j - 1]);
    EXPECT_EQ(baseline[j][1], expected[j - 1]);
  }
}

TEST_F(Workspace, AttackBelowBaselineWhenRankingsDisagree) {
  write("d.txt", "a\t50\nb\t30\nc\t20\nd\t10\ne\t5\n");
  write("u.txt", "a\na\na\nb\nb\nc\ne\n");
  write("exp.ini", "[dictionaries]\nonly = d.txt\n[password_set]\npath = u.txt\n"
                   "[attack]\nguesses = 6\nruns = 1\n");
  cmd_attack(load_config(dir_ / "exp.ini"));
  const auto summary = read_csv(dir_ / "out/summary.csv");
  const std::vector<std::string> attack = {"3", "5", "6", "6", "7", "7"};
  const std::vector<std::string> best = {"3", "5", "6", "7", "7", "7"};
  for (std::size_t j = 1; j < 7; ++j) {
    EXPECT_EQ(summary[j][1], attack[j - 1]);
    EXPECT_EQ(summary[j][3], best[j - 1]);
  }
}

TEST_F(Workspace, AttackOutputsAreConsistent) {
  const auto cfg = load_config(synth_experiment(
      2000, "[attack]\ninit = random\nguess = random-dict\nguesses = 25\nruns = 6\nseed = 4\n"));
  cmd_attack(cfg, 3);
  const auto trace = read_csv(dir_ / "out/trace.csv");
  ASSERT_EQ(trace[0], (std::vector<std::string>{"run", "guess_index", "word", "successes",
                                                 "cumulative", "qhat_1", "qhat_2", "qhat_3"}));
  ASSERT_EQ(trace.size(), 1u + 6 * 25);

  const Corpus corpus = load_corpus(cfg);
  const PasswordSet ps = obtain_password_set(cfg, corpus);
  const auto best = optimal_baseline(ps, 25);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const auto& row = trace[i];
    const auto guess = std::stoul(row[1]);
    EXPECT_EQ(std::stoul(row[0]), (i - 1) / 25);
    EXPECT_EQ(guess, (i - 1) % 25 + 1);
    EXPECT_EQ(std::stoull(row[3]), oracle_count(ps, Word(row[2])));
    EXPECT_LE(std::stoull(row[4]), best[guess - 1]);
    double sum = 0;
    for (std::size_t k = 5; k < 8; ++k) sum += std::stod(row[k]);
    EXPECT_NEAR(sum, 1.0, 1e-8);
  }

  const auto summary = read_csv(dir_ / "out/summary.csv");
  ASSERT_EQ(summary.size(), 26u);
  for (std::size_t j = 1; j < summary.size(); ++j) {
    EXPECT_EQ(std::stoull(summary[j][3]), best[j - 1]);
    if (j > 1) EXPECT_GE(std::stoull(summary[j][3]), std::stoull(summary[j - 1][3]));
    EXPECT_LE(std::stod(summary[j][1]), static_cast<double>(best[j - 1]));
  }
}

TEST_F(Workspace, AttackIsByteIdenticalAcrossInvocationsAndThreadCounts) {
  const auto cfg = load_config(synth_experiment(
      1500, "[attack]\ninit = random\nguess = random-dict\nguesses = 20\nruns = 5\n"));
  cmd_attack(cfg, 1);
  const std::string trace = slurp(dir_ / "out/trace.csv");
  const std::string summary = slurp(dir_ / "out/summary.csv");
  cmd_attack(cfg, 4);
  EXPECT_EQ(trace, slurp(dir_ / "out/trace.csv"));
  EXPECT_EQ(summary, slurp(dir_ / "out/summary.csv"));
}

TEST_F(Workspace, EstimateTrajectory) {
  write("a.txt", "x\t10\ny\t5\n");
  write("b.txt", "y\t10\nz\t5\n");
  write("c.txt", "z\t10\nw\t5\n");
  write("d.txt", "w\t10\nv\t5\n");
  write("u.txt", "x\nx\ny\nz\nw\nv\nx\ny\n");
  write("exp.ini", "[dictionaries]\na = a.txt\nb = b.txt\nc = c.txt\nd = d.txt\n"
                   "[password_set]\npath = u.txt\n");
  const auto cfg = load_config(dir_ / "exp.ini");
  const std::vector<Word> guesses{Word("x"), Word("y")};
  cmd_estimate(cfg, guesses);
  const auto rows = read_csv(dir_ / "out/estimate.csv");
  ASSERT_GE(rows.size(), 2u);
  ASSERT_LE(rows.size(), 1u + 1 + static_cast<std::size_t>(cfg.descent.max_steps));
  EXPECT_EQ(rows[0], (std::vector<std::string>{"step", "qhat_1", "qhat_2", "qhat_3", "qhat_4",
                                                "loglik"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"0", "0.25", "0.25", "0.25", "0.25",
                                                rows[1][5]}));
  for (std::size_t i = 2; i < rows.size(); ++i) {
    EXPECT_GE(std::stod(rows[i][5]), std::stod(rows[i - 1][5]));
    EXPECT_GT(std::stoi(rows[i][0]), std::stoi(rows[i - 1][0]));
  }
}

TEST_F(Workspace, EstimateWordOutsideCorpusLeavesStartingPoint) {
  write("a.txt", "x\t10\n");
  write("b.txt", "y\t10\n");
  write("u.txt", "x\ny\n");
  write("exp.ini", "[dictionaries]\na = a.txt\nb = b.txt\n[password_set]\npath = u.txt\n");
  const auto cfg = load_config(dir_ / "exp.ini");
  const std::vector<Word> guesses{Word("nowhere")};
  cmd_estimate(cfg, guesses);
  const auto rows = read_csv(dir_ / "out/estimate.csv");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][1], "0.5");
    EXPECT_EQ(rows[i][2], "0.5");
  }
}

TEST_F(Workspace, EstimateRejectsBadWordLists) {
  const auto cfg = load_config(synth_experiment(50));
  try {
    cmd_estimate(cfg, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError);
  }
  const std::vector<Word> twice{Word("common1"), Word("common1")};
  try {
    cmd_estimate(cfg, twice);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError);
  }
}

TEST_F(Workspace, BadDictionaryNamesFileAndLine) {
  write("d.txt", "a\t5\nb\tfive\n");
  write("exp.ini", "[dictionaries]\nd = d.txt\n[composition]\nproportions = 1\nusers = 3\n");
  try {
    cmd_compose(load_config(dir_ / "exp.ini"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedLine);
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("d.txt"), std::string::npos);
  }
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "mabguess");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_main(static_cast<int>(argv.size()), argv.data());
}

TEST_F(Workspace, ExitCodes) {
  const std::string exp = synth_experiment(200).string();
  EXPECT_EQ(run({"compose", "--config", exp}), kExitOk);
  EXPECT_EQ(run({"attack", "--config", exp, "--runs", "2", "--guesses", "5"}), kExitOk);
  EXPECT_EQ(run({"estimate", "--config", exp, "--word", "common1", "--word", "common2"}),
            kExitOk);
  EXPECT_EQ(run({"baseline", "--config", exp, "--out", (dir_ / "b").string()}), kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "b/baseline.csv"));
  EXPECT_EQ(run({"--help"}), kExitOk);

  EXPECT_EQ(run({}), kExitConfig);
  EXPECT_EQ(run({"attack"}), kExitConfig);
  EXPECT_EQ(run({"attack", "--config", exp, "--init", "greedy"}), kExitConfig);
  EXPECT_EQ(run({"attack", "--config", exp, "--runs", "0"}), kExitConfig);
  EXPECT_EQ(run({"estimate", "--config", exp}), kExitConfig);

  write("bad.ini", "[dictionaries]\nd = missing.txt\n[composition]\nproportions = 1\nusers = 3\n");
  EXPECT_EQ(run({"compose", "--config", (dir_ / "bad.ini").string()}), kExitIo);
  EXPECT_EQ(run({"compose", "--config", (dir_ / "none.ini").string()}), kExitIo);
}

TEST(ExitCode, Mapping) {
  EXPECT_EQ(exit_code_for(ErrorCode::kConfigError), kExitConfig);
  EXPECT_EQ(exit_code_for(ErrorCode::kInvalidWeights), kExitConfig);
  EXPECT_EQ(exit_code_for(ErrorCode::kIoError), kExitIo);
  EXPECT_EQ(exit_code_for(ErrorCode::kMalformedLine), kExitIo);
  EXPECT_EQ(exit_code_for(ErrorCode::kInvariantViolation), kExitInternal);
}

}  // namespace
}  // namespace mabguess::cli
