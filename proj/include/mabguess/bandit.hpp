#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include "mabguess/dictionary.hpp"
#include "mabguess/mixture_mle.hpp"

namespace mabguess {

using Rng = std::mt19937_64;

// Starting point of the descent run after each guess.
enum class InitPolicy { kRandom, kAverage, kBest };

// How the next guess is chosen from the current estimate.
enum class GuessPolicy { kRandomDictionary, kBestDictionary, kByQ };

std::string_view to_string(InitPolicy policy) noexcept;
std::string_view to_string(GuessPolicy policy) noexcept;
// Accepts "random" | "average" | "best".
std::optional<InitPolicy> parse_init_policy(std::string_view text);
// Accepts "random-dict" | "best-dict" | "by-q".
std::optional<GuessPolicy> parse_guess_policy(std::string_view text);

// State of one attack run. Owns the run's random stream so that a fixed
// seed reproduces the whole guess sequence.
class BanditState {
 public:
  BanditState(std::size_t dictionaries, std::uint64_t population,
              std::uint64_t seed);

  const GuessHistory& history() const noexcept { return history_; }
  const MixtureWeights& current_estimate() const noexcept { return current_; }
  const std::optional<MixtureWeights>& previous_estimate() const noexcept {
    return previous_;
  }
  const WordSet& guessed() const noexcept { return guessed_; }
  std::uint64_t seed() const noexcept { return seed_; }
  Rng& rng() noexcept { return rng_; }

 private:
  friend void record_observation(BanditState&, const Word&, std::uint64_t,
                                 const Corpus&, InitPolicy, const DescentConfig&);

  GuessHistory history_;
  MixtureWeights current_;
  std::optional<MixtureWeights> previous_;
  WordSet guessed_;
  std::uint64_t seed_;
  Rng rng_;
};

// Average: 1/n each. Random: uniform on the simplex. Best: `previous`, or
// Average when there is none.
MixtureWeights initialize_weights(InitPolicy policy, std::size_t n,
                                  const std::optional<MixtureWeights>& previous,
                                  Rng& rng);

// Next word to try, or nullopt once the whole union vocabulary is guessed.
std::optional<Word> select_guess(GuessPolicy policy, const Corpus& corpus,
                                 const BanditState& state, Rng& rng);

// Appends (word, successes) and re-estimates the mixture from a start
// chosen by `init`. Throws kDuplicateGuess or kSuccessExceedsPopulation,
// leaving the state untouched.
void record_observation(BanditState& state, const Word& word,
                        std::uint64_t successes, const Corpus& corpus,
                        InitPolicy init, const DescentConfig& config);

}  // namespace mabguess
