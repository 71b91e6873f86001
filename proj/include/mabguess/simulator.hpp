#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "mabguess/bandit.hpp"
#include "mabguess/dictionary.hpp"
#include "mabguess/mixture_mle.hpp"

namespace mabguess {

// The N users under attack. Synthetic sets also remember the mixture they
// were drawn from and which dictionary produced each user's password.
class PasswordSet {
 public:
  // Throws kEmptyInput when `passwords` is empty, kInvalidArgument when
  // the labels do not line up with the passwords.
  explicit PasswordSet(std::vector<Word> passwords,
                       std::optional<MixtureWeights> true_mixture = std::nullopt,
                       std::optional<std::vector<std::size_t>> source_labels = std::nullopt);

  std::size_t size() const noexcept { return passwords_.size(); }
  std::span<const Word> passwords() const noexcept { return passwords_; }
  const std::optional<MixtureWeights>& true_mixture() const noexcept {
    return true_mixture_;
  }
  const std::optional<std::vector<std::size_t>>& source_labels() const noexcept {
    return source_labels_;
  }
  // Users per source dictionary; empty for sets without labels.
  std::vector<std::uint64_t> source_counts() const;

  std::uint64_t count(const Word& word) const;
  const std::unordered_map<Word, std::uint64_t>& multiplicities() const noexcept {
    return counts_;
  }

 private:
  std::vector<Word> passwords_;
  std::optional<MixtureWeights> true_mixture_;
  std::optional<std::vector<std::size_t>> source_labels_;
  std::unordered_map<Word, std::uint64_t> counts_;
};

// Hamilton apportionment of `total` seats by `weights`: floors first, then
// one extra each in order of largest fractional part, ties to the lower
// index.
std::vector<std::uint64_t> apportion_largest_remainder(const MixtureWeights& weights,
                                                       std::uint64_t total);

// Draws users with replacement from each dictionary's frequency
// distribution, per-source counts fixed by apportion_largest_remainder.
PasswordSet compose_password_set(const Corpus& corpus,
                                 const MixtureWeights& proportions,
                                 std::uint64_t users, std::uint64_t seed);

// Number of users whose password is exactly `word`.
std::uint64_t oracle_count(const PasswordSet& ps, const Word& word);

// One password per line. Blank lines are skipped on read.
PasswordSet read_password_set(std::istream& in);
PasswordSet read_password_file(const std::filesystem::path& path);
void write_password_set(const PasswordSet& ps, std::ostream& out);

struct GuessRecord {
  Word word;
  std::uint64_t successes;
  std::uint64_t cumulative;
  MixtureWeights estimate;
};

struct AttackTrace {
  std::vector<GuessRecord> records;
  InitPolicy init;
  GuessPolicy guess;
  std::uint64_t seed;
  std::size_t budget;
};

// Guess, query the oracle, re-estimate; `budget` times or until every word
// of the corpus has been tried.
AttackTrace run_attack(const Corpus& corpus, const PasswordSet& ps,
                       InitPolicy init, GuessPolicy guess, std::size_t budget,
                       const DescentConfig& config, std::uint64_t seed);

// Cumulative successes of guessing the set's own words by descending
// multiplicity (ties in byte order), padded to `budget` entries.
std::vector<std::uint64_t> optimal_baseline(const PasswordSet& ps,
                                            std::size_t budget);

// Cumulative column of a trace, padded with its last value up to `length`.
std::vector<std::uint64_t> cumulative_curve(const AttackTrace& trace,
                                            std::size_t length);

// Per-guess mean of the cumulative curves. Traces shorter than the largest
// budget are padded. Throws kEmptyInput.
std::vector<double> average_traces(std::span<const AttackTrace> traces);

}  // namespace mabguess
