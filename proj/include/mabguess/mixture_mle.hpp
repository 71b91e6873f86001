#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mabguess/dictionary.hpp"

namespace mabguess {

inline constexpr double kSimplexTolerance = 1e-9;
inline constexpr double kDefaultProbabilityFloor = 1e-12;

// A point q on the probability simplex: q_i >= 0 and sum q_i = 1.
class MixtureWeights {
 public:
  // Throws kInvalidWeights when `q` is empty or off the simplex by more
  // than kSimplexTolerance.
  explicit MixtureWeights(std::vector<double> q);

  static MixtureWeights uniform(std::size_t n);

  std::size_t size() const noexcept { return q_.size(); }
  double operator[](std::size_t i) const { return q_[i]; }
  std::span<const double> values() const noexcept { return q_; }

  friend bool operator==(const MixtureWeights&, const MixtureWeights&) = default;

 private:
  std::vector<double> q_;
};

bool on_simplex(std::span<const double> q, double tolerance = kSimplexTolerance);

struct Observation {
  Word word;
  std::uint64_t successes;
};

// Outcomes (k_j, N_j) of the guesses made so far against N users.
class GuessHistory {
 public:
  explicit GuessHistory(std::uint64_t population);

  // Throws kDuplicateGuess or kSuccessExceedsPopulation.
  void add(Word word, std::uint64_t successes);

  std::uint64_t population() const noexcept { return population_; }
  std::span<const Observation> observations() const noexcept {
    return observations_;
  }
  std::uint64_t total_successes() const noexcept { return total_successes_; }
  std::uint64_t remaining() const noexcept {
    return population_ - total_successes_;
  }
  bool contains(const Word& word) const { return words_.contains(word); }

 private:
  std::uint64_t population_;
  std::vector<Observation> observations_;
  WordSet words_;
  std::uint64_t total_successes_ = 0;
};

struct DescentConfig {
  int max_steps = 100;
  double initial_step = 0.1;
  double backtrack_factor = 0.5;
  double min_step = 1e-12;
  double probability_floor = kDefaultProbabilityFloor;
  double convergence_tol = 1e-10;

  // Throws kInvalidArgument naming the first field out of range.
  void validate() const;

  friend bool operator==(const DescentConfig&, const DescentConfig&) = default;
};

// Q_k = sum_i q_i p_i(k).
double mixture_probability(const Corpus& corpus, const MixtureWeights& weights,
                           const Word& word);

// Censored multinomial log-likelihood without the multinomial coefficient:
//   sum_j N_j ln max(Q_j, floor) + (N - sum_j N_j) ln max(1 - sum_j Q_j, floor)
// Terms with N_j = 0 contribute nothing to the first sum.
double log_likelihood(const Corpus& corpus, const MixtureWeights& weights,
                      const GuessHistory& history,
                      double floor = kDefaultProbabilityFloor);

// Analytic gradient of log_likelihood with respect to q. The floors are
// applied to the denominators, so where a floor is active the result is
// the gradient of the unfloored expression evaluated at the floored value.
std::vector<double> gradient(const Corpus& corpus, const MixtureWeights& weights,
                             const GuessHistory& history,
                             double floor = kDefaultProbabilityFloor);

// Euclidean projection onto the standard simplex (sort and threshold).
// Throws kEmptyInput for an empty vector.
MixtureWeights project_to_simplex(std::span<const double> v);

struct DescentStep {
  int step;  // 0 is the starting point
  const MixtureWeights& weights;
  double log_likelihood;
};
using DescentObserver = std::function<void(const DescentStep&)>;

struct EstimateResult {
  MixtureWeights weights;
  double log_likelihood;
  int steps_taken;
};

// Projected gradient ascent with a backtracking step from `init`. The
// observer, when set, sees the starting point and every accepted iterate.
EstimateResult estimate(const Corpus& corpus, const GuessHistory& history,
                        const MixtureWeights& init, const DescentConfig& config,
                        const DescentObserver& observer = {});

}  // namespace mabguess
