#include "mabguess/bandit.hpp"

#include <vector>

namespace mabguess {

std::string_view to_string(InitPolicy policy) noexcept {
  switch (policy) {
    case InitPolicy::kRandom: return "random";
    case InitPolicy::kAverage: return "average";
    case InitPolicy::kBest: return "best";
  }
  return "?";
}

std::string_view to_string(GuessPolicy policy) noexcept {
  switch (policy) {
    case GuessPolicy::kRandomDictionary: return "random-dict";
    case GuessPolicy::kBestDictionary: return "best-dict";
    case GuessPolicy::kByQ: return "by-q";
  }
  return "?";
}

std::optional<InitPolicy> parse_init_policy(std::string_view text) {
  for (auto p : {InitPolicy::kRandom, InitPolicy::kAverage, InitPolicy::kBest}) {
    if (text == to_string(p)) return p;
  }
  return std::nullopt;
}

std::optional<GuessPolicy> parse_guess_policy(std::string_view text) {
  for (auto p : {GuessPolicy::kRandomDictionary, GuessPolicy::kBestDictionary,
                 GuessPolicy::kByQ}) {
    if (text == to_string(p)) return p;
  }
  return std::nullopt;
}

BanditState::BanditState(std::size_t dictionaries, std::uint64_t population,
                         std::uint64_t seed)
    : history_(population),
      current_(MixtureWeights::uniform(dictionaries)),
      seed_(seed),
      rng_(seed) {}

MixtureWeights initialize_weights(InitPolicy policy, std::size_t n,
                                  const std::optional<MixtureWeights>& previous,
                                  Rng& rng) {
  switch (policy) {
    case InitPolicy::kRandom: {
      std::exponential_distribution<double> exp1(1.0);
      std::vector<double> q(n);
      double sum = 0.0;
      for (double& x : q) {
        x = exp1(rng);
        sum += x;
      }
      for (double& x : q) x /= sum;
      return MixtureWeights(std::move(q));
    }
    case InitPolicy::kBest:
      if (previous && previous->size() == n) return *previous;
      [[fallthrough]];
    case InitPolicy::kAverage:
      break;
  }
  return MixtureWeights::uniform(n);
}

std::optional<Word> select_guess(GuessPolicy policy, const Corpus& corpus,
                                 const BanditState& state, Rng& rng) {
  const WordSet& guessed = state.guessed();

  if (policy == GuessPolicy::kByQ) {
    const auto q = state.current_estimate().values();
    const auto vocabulary = corpus.union_vocabulary();
    std::optional<std::size_t> best;
    double best_score = -1.0;
    // Vocabulary is in byte order, so a strict comparison keeps the least
    // word among equal scores.
    for (std::size_t v = 0; v < vocabulary.size(); ++v) {
      if (guessed.contains(vocabulary[v])) continue;
      const auto p = corpus.probabilities_at(v);
      double score = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) score += q[i] * p[i];
      if (score > best_score) {
        best_score = score;
        best = v;
      }
    }
    if (!best) return std::nullopt;
    return vocabulary[*best];
  }

  std::vector<std::size_t> open;
  std::vector<Word> next;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (auto w = corpus[i].next_unguessed(guessed)) {
      open.push_back(i);
      next.push_back(std::move(*w));
    }
  }
  if (open.empty()) return std::nullopt;

  if (policy == GuessPolicy::kRandomDictionary) {
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    return next[pick(rng)];
  }

  const MixtureWeights& q = state.current_estimate();
  std::size_t best = 0;
  for (std::size_t k = 1; k < open.size(); ++k) {
    if (q[open[k]] > q[open[best]]) best = k;
  }
  return next[best];
}

void record_observation(BanditState& state, const Word& word,
                        std::uint64_t successes, const Corpus& corpus,
                        InitPolicy init, const DescentConfig& config) {
  if (state.current_.size() != corpus.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "bandit state and corpus disagree on dictionary count");
  }
  config.validate();
  state.history_.add(word, successes);
  state.guessed_.insert(word);
  state.previous_ = state.current_;
  const MixtureWeights start =
      initialize_weights(init, corpus.size(), state.previous_, state.rng_);
  state.current_ = estimate(corpus, state.history_, start, config).weights;
}

}  // namespace mabguess
