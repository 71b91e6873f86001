#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mabguess/bandit.hpp"
#include "mabguess/mixture_mle.hpp"

namespace mabguess::cli {

struct DictionarySource {
  std::string name;
  std::filesystem::path path;

  friend bool operator==(const DictionarySource&, const DictionarySource&) = default;
};

struct Composition {
  std::vector<double> proportions;  // one per dictionary, in [dictionaries] order
  std::uint64_t users = 0;
  std::uint64_t seed = 1;

  friend bool operator==(const Composition&, const Composition&) = default;
};

// One experiment: which dictionaries, which users, which policies. The
// file is INI-style; comment lines start with ';' or '#'.
//
//   [dictionaries]
//   ; name = path, in corpus order
//   rockyou = lists/rockyou.txt
//
//   ; either [composition] ...
//   [composition]
//   proportions = 0.6, 0.3, 0.1
//   users = 10000
//   seed = 7
//   ; ... or an existing one-password-per-line file
//   [password_set]
//   path = users.txt
//
//   [attack]
//   ; random | average | best
//   init = average
//   ; random-dict | best-dict | by-q
//   guess = by-q
//   guesses = 100
//   runs = 50
//   seed = 1
//
//   ; any DescentConfig field
//   [descent]
//   max_steps = 100
//
//   [estimate]
//   words_file = guesses.txt
//
//   [output]
//   directory = out
//
// Relative paths are resolved against the config file's directory.
struct ExperimentConfig {
  std::vector<DictionarySource> dictionaries;
  std::optional<Composition> composition;
  std::optional<std::filesystem::path> password_set;
  InitPolicy init = InitPolicy::kAverage;
  GuessPolicy guess = GuessPolicy::kByQ;
  std::size_t guesses = 100;
  std::size_t runs = 50;
  std::uint64_t seed = 1;
  DescentConfig descent;
  std::optional<std::filesystem::path> estimate_words;
  std::filesystem::path output = "out";

  // Throws kConfigError naming the offending field.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Throws kConfigError with a "section.key" field path, or with the line
// number for syntax errors.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

void write_config(const ExperimentConfig& config, std::ostream& out);

}  // namespace mabguess::cli
