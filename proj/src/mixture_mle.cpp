#include "mabguess/mixture_mle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace mabguess {

bool on_simplex(std::span<const double> q, double tolerance) {
  if (q.empty()) return false;
  double sum = 0.0;
  for (double x : q) {
    if (!std::isfinite(x) || x < 0.0) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

MixtureWeights::MixtureWeights(std::vector<double> q) : q_(std::move(q)) {
  if (!on_simplex(q_)) {
    throw Error(ErrorCode::kInvalidWeights,
                "weights must be non-negative and sum to 1");
  }
}

MixtureWeights MixtureWeights::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidWeights, "zero dictionaries");
  return MixtureWeights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

GuessHistory::GuessHistory(std::uint64_t population) : population_(population) {
  if (population_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "population must be positive");
  }
}

void GuessHistory::add(Word word, std::uint64_t successes) {
  if (words_.contains(word)) {
    throw Error(ErrorCode::kDuplicateGuess,
                "'" + word.str() + "' was already guessed");
  }
  if (successes > remaining()) {
    throw Error(ErrorCode::kSuccessExceedsPopulation,
                std::to_string(successes) + " successes with only " +
                    std::to_string(remaining()) + " users left");
  }
  words_.insert(word);
  observations_.push_back({std::move(word), successes});
  total_successes_ += successes;
}

void DescentConfig::validate() const {
  auto fail = [](const char* field) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("descent.") + field + " out of range");
  };
  if (max_steps < 1) fail("max_steps");
  if (!(initial_step > 0.0) || !std::isfinite(initial_step)) fail("initial_step");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) fail("backtrack_factor");
  if (!(min_step > 0.0) || !std::isfinite(min_step)) fail("min_step");
  if (!(probability_floor > 0.0 && probability_floor < 1.0)) fail("probability_floor");
  if (!(convergence_tol > 0.0) || !std::isfinite(convergence_tol)) fail("convergence_tol");
}

namespace {

constexpr double kSufficientIncrease = 1e-4;

void check_dimensions(const Corpus& corpus, const MixtureWeights& weights) {
  if (weights.size() != corpus.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(weights.size()) + " weights for " +
                    std::to_string(corpus.size()) + " dictionaries");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// The history reduced to what the objective needs: the successful guesses'
// probability rows, and the per-dictionary mass of every guessed word.
class Likelihood {
 public:
  Likelihood(const Corpus& corpus, const GuessHistory& history, double floor)
      : n_(corpus.size()),
        floor_(floor),
        guessed_mass_(n_, 0.0),
        remainder_(static_cast<double>(history.remaining())) {
    for (const Observation& obs : history.observations()) {
      const std::vector<double> p = corpus.probabilities_of(obs.word);
      for (std::size_t i = 0; i < n_; ++i) guessed_mass_[i] += p[i];
      if (obs.successes > 0) {
        hit_rows_.insert(hit_rows_.end(), p.begin(), p.end());
        hit_counts_.push_back(static_cast<double>(obs.successes));
      }
    }
  }

  double value(std::span<const double> q) const {
    double total = 0.0;
    for (std::size_t j = 0; j < hit_counts_.size(); ++j) {
      total += hit_counts_[j] * std::log(std::max(dot(row(j), q), floor_));
    }
    if (remainder_ > 0.0) {
      total += remainder_ * std::log(std::max(1.0 - dot(guessed_mass_, q), floor_));
    }
    return total;
  }

  std::vector<double> gradient(std::span<const double> q) const {
    std::vector<double> g(n_, 0.0);
    for (std::size_t j = 0; j < hit_counts_.size(); ++j) {
      const auto p = row(j);
      const double scale = hit_counts_[j] / std::max(dot(p, q), floor_);
      for (std::size_t i = 0; i < n_; ++i) g[i] += scale * p[i];
    }
    if (remainder_ > 0.0) {
      const double scale =
          remainder_ / std::max(1.0 - dot(guessed_mass_, q), floor_);
      for (std::size_t i = 0; i < n_; ++i) g[i] -= scale * guessed_mass_[i];
    }
    return g;
  }

 private:
  std::span<const double> row(std::size_t j) const {
    return std::span<const double>(hit_rows_).subspan(j * n_, n_);
  }

  std::size_t n_;
  double floor_;
  std::vector<double> hit_rows_;
  std::vector<double> hit_counts_;
  std::vector<double> guessed_mass_;
  double remainder_;
};

}  // namespace

double mixture_probability(const Corpus& corpus, const MixtureWeights& weights,
                           const Word& word) {
  check_dimensions(corpus, weights);
  if (auto index = corpus.vocabulary_index(word)) {
    return dot(corpus.probabilities_at(*index), weights.values());
  }
  return 0.0;
}

double log_likelihood(const Corpus& corpus, const MixtureWeights& weights,
                      const GuessHistory& history, double floor) {
  check_dimensions(corpus, weights);
  return Likelihood(corpus, history, floor).value(weights.values());
}

std::vector<double> gradient(const Corpus& corpus, const MixtureWeights& weights,
                             const GuessHistory& history, double floor) {
  check_dimensions(corpus, weights);
  return Likelihood(corpus, history, floor).gradient(weights.values());
}

MixtureWeights project_to_simplex(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::kEmptyInput, "cannot project empty vector");

  // The projection commutes with adding a constant to every coordinate.
  // Shifting the maximum to zero keeps (1 - prefix) from cancelling when
  // the input sits far off the simplex along the all-ones direction.
  const double shift = *std::max_element(v.begin(), v.end());
  std::vector<double> sorted(v.size());
  std::transform(v.begin(), v.end(), sorted.begin(), [&](double x) { return x - shift; });
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double theta = 0.0;
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    prefix += sorted[r];
    const double candidate = (1.0 - prefix) / static_cast<double>(r + 1);
    if (sorted[r] + candidate > 0.0) theta = candidate;
  }

  std::vector<double> q(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) q[i] = std::max((v[i] - shift) + theta, 0.0);
  return MixtureWeights(std::move(q));
}

EstimateResult estimate(const Corpus& corpus, const GuessHistory& history,
                        const MixtureWeights& init, const DescentConfig& config,
                        const DescentObserver& observer) {
  check_dimensions(corpus, init);
  config.validate();

  const Likelihood objective(corpus, history, config.probability_floor);
  MixtureWeights current = init;
  double current_ll = objective.value(current.values());
  if (observer) observer({0, current, current_ll});

  int steps = 0;
  double step = config.initial_step;
  // Only the component of the gradient tangent to the simplex moves the
  // projected iterate; dropping the all-ones component keeps magnitudes
  // meaningful when a floored remainder term dominates it.
  auto tangent_gradient = [&](const MixtureWeights& at) {
    std::vector<double> grad = objective.gradient(at.values());
    const double mean =
        std::accumulate(grad.begin(), grad.end(), 0.0) / static_cast<double>(grad.size());
    for (double& x : grad) x -= mean;
    return grad;
  };
  std::vector<double> g = tangent_gradient(current);
  std::vector<double> moved(corpus.size());
  // A trial is accepted when the projected move gains at least a small
  // fraction of its first-order prediction.
  auto try_step = [&](double length) -> std::optional<std::pair<MixtureWeights, double>> {
    for (std::size_t i = 0; i < moved.size(); ++i) {
      moved[i] = current[i] + length * g[i];
    }
    MixtureWeights candidate = project_to_simplex(moved);
    double predicted = 0.0;
    for (std::size_t i = 0; i < moved.size(); ++i) {
      predicted += g[i] * (candidate[i] - current[i]);
    }
    if (predicted <= 0.0) return std::nullopt;
    const double candidate_ll = objective.value(candidate.values());
    if (candidate_ll < current_ll + kSufficientIncrease * predicted) return std::nullopt;
    return std::pair{std::move(candidate), candidate_ll};
  };

  while (steps < config.max_steps) {
    double g_max = 0.0;
    for (double x : g) g_max = std::max(g_max, std::abs(x));
    if (g_max == 0.0) break;

    // min_step bounds the length of the move rather than the multiplier,
    // since the floors can make the gradient arbitrarily large.
    step = std::max(step, config.min_step / g_max);

    std::optional<MixtureWeights> accepted;
    double accepted_ll = current_ll;
    bool first_trial = true;
    for (; step * g_max >= config.min_step; step *= config.backtrack_factor) {
      if (auto hit = try_step(step)) {
        accepted = std::move(hit->first);
        accepted_ll = hit->second;
        break;
      }
      first_trial = false;
    }
    // A first trial that succeeds may be far too short, as happens next to
    // a face of the simplex where the curvature blows up. Lengthen while the
    // likelihood keeps rising.
    while (accepted && first_trial) {
      const double longer = step / config.backtrack_factor;
      auto hit = try_step(longer);
      if (!hit || !(hit->second > accepted_ll) || hit->first == *accepted) break;
      accepted = std::move(hit->first);
      accepted_ll = hit->second;
      step = longer;
    }

    const double improvement = accepted_ll - current_ll;
    if (!accepted || !(improvement > 0.0)) break;

    std::vector<double> next_g = tangent_gradient(*accepted);
    // Barzilai-Borwein length for the next trial step: |s|^2 / <s, y> with
    // s the move and y the decrease in gradient along it.
    double ss = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double s_i = (*accepted)[i] - current[i];
      ss += s_i * s_i;
      sy += s_i * (g[i] - next_g[i]);
    }
    step = sy > 0.0 ? ss / sy : step / config.backtrack_factor;

    current = std::move(*accepted);
    current_ll = accepted_ll;
    g = std::move(next_g);
    ++steps;
    if (observer) observer({steps, current, current_ll});
    if (improvement < config.convergence_tol) break;
  }
  return {std::move(current), current_ll, steps};
}

}  // namespace mabguess
