#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mabguess/cli/config.hpp"
#include "mabguess/dictionary.hpp"
#include "mabguess/simulator.hpp"
#include "mabguess/synthetic.hpp"

namespace mabguess::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitIo = 3,
  kExitInternal = 4,
};

int exit_code_for(ErrorCode code) noexcept;

// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> guesses;
  std::optional<InitPolicy> init;
  std::optional<GuessPolicy> guess;
};

// --seed sets composition.seed for `compose` and attack.seed otherwise.
void apply_overrides(ExperimentConfig& config, const Overrides& overrides, bool for_compose);

Corpus load_corpus(const ExperimentConfig& config);

// Composes from [composition] or reads [password_set].
PasswordSet obtain_password_set(const ExperimentConfig& config, const Corpus& corpus);

// Each command writes into config.output and returns the files it wrote.

// passwords.txt (one user per line) and passwords.meta (proportions, seed,
// per-source counts).
std::vector<std::filesystem::path> cmd_compose(const ExperimentConfig& config);

// trace.csv and summary.csv. Run r uses seed attack.seed + r; runs are
// spread over `threads` workers (0 = hardware concurrency).
std::vector<std::filesystem::path> cmd_attack(const ExperimentConfig& config,
                                              unsigned threads = 0);

// estimate.csv: the descent trajectory for a fixed list of guesses.
// Throws kConfigError when `guesses` is empty or repeats a word.
std::vector<std::filesystem::path> cmd_estimate(const ExperimentConfig& config,
                                                std::span<const Word> guesses);

// baseline.csv for attack.guesses guesses.
std::vector<std::filesystem::path> cmd_baseline(const ExperimentConfig& config);

// synthN.txt frequency lists for a synthetic corpus.
std::vector<std::filesystem::path> cmd_synth(const SyntheticCorpusOptions& options,
                                             std::uint64_t seed,
                                             const std::filesystem::path& out);

// Entry point of the `mabguess` tool; returns the process exit code.
int run_main(int argc, const char* const* argv);

}  // namespace mabguess::cli
