#include <fmt/format.h>

#include <CLI11.hpp>
#include <exception>
#include <fstream>
#include <string>
#include <vector>

#include "mabguess/cli/commands.hpp"

namespace mabguess::cli {

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> guesses;
  std::optional<std::string> init;
  std::optional<std::string> guess;
  std::vector<std::string> words;
};

void add_common(CLI::App& sub, CommonOptions& o) {
  sub.add_option("-c,--config", o.config, "Experiment file")->required();
  sub.add_option("--seed", o.seed, "Random seed");
  sub.add_option("--out", o.out, "Output directory");
  sub.add_option("--runs", o.runs, "Independent attack runs")->check(CLI::PositiveNumber);
  sub.add_option("--guesses", o.guesses, "Guesses per run")->check(CLI::PositiveNumber);
  sub.add_option("--init", o.init, "random | average | best");
  sub.add_option("--guess", o.guess, "random-dict | best-dict | by-q");
}

Overrides to_overrides(const CommonOptions& o) {
  Overrides ov;
  ov.seed = o.seed;
  if (o.out) ov.out = *o.out;
  ov.runs = o.runs;
  ov.guesses = o.guesses;
  if (o.init) {
    ov.init = parse_init_policy(*o.init);
    if (!ov.init) throw Error(ErrorCode::kConfigError, "--init: unknown policy '" + *o.init + "'");
  }
  if (o.guess) {
    ov.guess = parse_guess_policy(*o.guess);
    if (!ov.guess) {
      throw Error(ErrorCode::kConfigError, "--guess: unknown policy '" + *o.guess + "'");
    }
  }
  return ov;
}

std::vector<Word> read_words_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read '" + path.string() + "'");
  std::vector<Word> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.emplace_back(line);
  }
  return words;
}

}  // namespace

int run_main(int argc, const char* const* argv) {
  CLI::App app{"Mixture-estimating password guesser"};
  app.require_subcommand(1);

  CommonOptions common;
  CLI::App* compose = app.add_subcommand("compose", "Draw a synthetic password set");
  CLI::App* attack = app.add_subcommand("attack", "Run guessing attacks");
  CLI::App* estimate_cmd = app.add_subcommand("estimate", "Fit the mixture to fixed guesses");
  CLI::App* baseline = app.add_subcommand("baseline", "Optimal guessing curve");
  for (CLI::App* sub : {compose, attack, estimate_cmd, baseline}) add_common(*sub, common);
  estimate_cmd->add_option("--word", common.words, "Guessed word (repeatable)");
  unsigned threads = 0;
  attack->add_option("--threads", threads, "Worker threads (0 = all cores)");

  SyntheticCorpusOptions synth_opts;
  std::uint64_t synth_seed = 1;
  std::string synth_out = "synth";
  CLI::App* synth = app.add_subcommand("synth", "Write Zipf frequency lists");
  synth->add_option("--out", synth_out, "Output directory");
  synth->add_option("--dictionaries", synth_opts.dictionaries)->check(CLI::PositiveNumber);
  synth->add_option("--words", synth_opts.words_per_dictionary)->check(CLI::PositiveNumber);
  synth->add_option("--shared", synth_opts.shared_words);
  synth->add_option("--exponent", synth_opts.zipf_exponent);
  synth->add_option("--top-count", synth_opts.top_count)->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (synth->parsed()) {
      for (const auto& p : cmd_synth(synth_opts, synth_seed, synth_out)) {
        fmt::print(stderr, "mabguess: wrote {}\n", p.string());
      }
      return kExitOk;
    }
    ExperimentConfig config = load_config(common.config);
    apply_overrides(config, to_overrides(common), compose->parsed());
    std::vector<std::filesystem::path> written;
    if (compose->parsed()) {
      written = cmd_compose(config);
    } else if (attack->parsed()) {
      written = cmd_attack(config, threads);
    } else if (estimate_cmd->parsed()) {
      std::vector<Word> words;
      if (config.estimate_words) words = read_words_file(*config.estimate_words);
      for (const auto& w : common.words) words.emplace_back(w);
      written = cmd_estimate(config, words);
    } else {
      written = cmd_baseline(config);
    }
    for (const auto& p : written) fmt::print(stderr, "mabguess: wrote {}\n", p.string());
    return kExitOk;
  } catch (const Error& e) {
    fmt::print(stderr, "mabguess: error: {}\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    fmt::print(stderr, "mabguess: internal error: {}\n", e.what());
    return kExitInternal;
  }
}

}  // namespace mabguess::cli
