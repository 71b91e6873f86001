#include "mabguess/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

namespace mabguess {

PasswordSet::PasswordSet(std::vector<Word> passwords,
                         std::optional<MixtureWeights> true_mixture,
                         std::optional<std::vector<std::size_t>> source_labels)
    : passwords_(std::move(passwords)),
      true_mixture_(std::move(true_mixture)),
      source_labels_(std::move(source_labels)) {
  if (passwords_.empty()) {
    throw Error(ErrorCode::kEmptyInput, "password set needs at least one user");
  }
  if (source_labels_) {
    if (source_labels_->size() != passwords_.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "one source label per password is required");
    }
    if (true_mixture_) {
      for (std::size_t label : *source_labels_) {
        if (label >= true_mixture_->size()) {
          throw Error(ErrorCode::kInvalidArgument, "source label out of range");
        }
      }
    }
  }
  for (const Word& w : passwords_) ++counts_[w];
}

std::vector<std::uint64_t> PasswordSet::source_counts() const {
  if (!source_labels_) return {};
  std::size_t n = true_mixture_ ? true_mixture_->size() : 0;
  for (std::size_t label : *source_labels_) n = std::max(n, label + 1);
  std::vector<std::uint64_t> counts(n, 0);
  for (std::size_t label : *source_labels_) ++counts[label];
  return counts;
}

std::uint64_t PasswordSet::count(const Word& word) const {
  auto it = counts_.find(word);
  return it == counts_.end() ? 0 : it->second;
}

std::vector<std::uint64_t> apportion_largest_remainder(const MixtureWeights& weights,
                                                       std::uint64_t total) {
  const std::size_t n = weights.size();
  std::vector<std::uint64_t> seats(n);
  std::vector<double> fraction(n);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double quota = weights[i] * static_cast<double>(total);
    // Quotas such as 0.3 * 10 land a few ulps off an integer.
    const double nearest = std::round(quota);
    if (std::abs(quota - nearest) < 1e-9 * std::max(1.0, quota)) quota = nearest;
    seats[i] = static_cast<std::uint64_t>(std::floor(quota));
    fraction[i] = quota - std::floor(quota);
    assigned += seats[i];
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return fraction[a] > fraction[b];
  });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % n) {
    ++seats[order[k]];
    ++assigned;
  }
  if (assigned != total) {
    throw Error(ErrorCode::kInvariantViolation, "apportionment overshoots");
  }
  return seats;
}

PasswordSet compose_password_set(const Corpus& corpus,
                                 const MixtureWeights& proportions,
                                 std::uint64_t users, std::uint64_t seed) {
  if (proportions.size() != corpus.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(proportions.size()) + " proportions for " +
                    std::to_string(corpus.size()) + " dictionaries");
  }
  if (users == 0) {
    throw Error(ErrorCode::kInvalidArgument, "password set needs at least one user");
  }

  const auto seats = apportion_largest_remainder(proportions, users);
  Rng rng(seed);
  std::vector<Word> passwords;
  std::vector<std::size_t> labels;
  passwords.reserve(users);
  labels.reserve(users);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto entries = corpus[i].entries();
    std::vector<std::uint64_t> cumulative(entries.size());
    std::uint64_t running = 0;
    for (std::size_t r = 0; r < entries.size(); ++r) {
      running += entries[r].count;
      cumulative[r] = running;
    }
    std::uniform_int_distribution<std::uint64_t> draw(0, running - 1);
    for (std::uint64_t u = 0; u < seats[i]; ++u) {
      const auto x = draw(rng);
      const auto r = std::upper_bound(cumulative.begin(), cumulative.end(), x) -
                     cumulative.begin();
      passwords.push_back(entries[static_cast<std::size_t>(r)].word);
      labels.push_back(i);
    }
  }
  return PasswordSet(std::move(passwords), proportions, std::move(labels));
}

std::uint64_t oracle_count(const PasswordSet& ps, const Word& word) {
  return ps.count(word);
}

PasswordSet read_password_set(std::istream& in) {
  std::vector<Word> passwords;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.find('\t') != std::string::npos) {
      throw Error(ErrorCode::kMalformedLine, "password contains a tab", line_no);
    }
    passwords.emplace_back(std::move(line));
  }
  if (in.bad()) throw Error(ErrorCode::kIoError, "read failure");
  if (passwords.empty()) throw Error(ErrorCode::kEmptyInput, "no passwords");
  return PasswordSet(std::move(passwords));
}

PasswordSet read_password_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  return read_password_set(in);
}

void write_password_set(const PasswordSet& ps, std::ostream& out) {
  for (const Word& w : ps.passwords()) out << w.str() << '\n';
}

AttackTrace run_attack(const Corpus& corpus, const PasswordSet& ps,
                       InitPolicy init, GuessPolicy guess, std::size_t budget,
                       const DescentConfig& config, std::uint64_t seed) {
  if (budget == 0) throw Error(ErrorCode::kInvalidArgument, "guess budget must be >= 1");
  config.validate();

  AttackTrace trace{{}, init, guess, seed, budget};
  trace.records.reserve(budget);
  BanditState state(corpus.size(), ps.size(), seed);
  std::uint64_t cumulative = 0;
  for (std::size_t j = 0; j < budget; ++j) {
    auto word = select_guess(guess, corpus, state, state.rng());
    if (!word) break;
    const std::uint64_t hits = oracle_count(ps, *word);
    record_observation(state, *word, hits, corpus, init, config);
    cumulative += hits;
    trace.records.push_back({std::move(*word), hits, cumulative, state.current_estimate()});
  }
  return trace;
}

std::vector<std::uint64_t> optimal_baseline(const PasswordSet& ps,
                                            std::size_t budget) {
  std::vector<std::pair<const Word*, std::uint64_t>> ranked;
  ranked.reserve(ps.multiplicities().size());
  for (const auto& [word, count] : ps.multiplicities()) ranked.emplace_back(&word, count);
  const std::size_t keep = std::min(budget, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep),
                    ranked.end(), [](const auto& a, const auto& b) {
                      if (a.second != b.second) return a.second > b.second;
                      return *a.first < *b.first;
                    });

  std::vector<std::uint64_t> curve(budget);
  std::uint64_t running = 0;
  for (std::size_t j = 0; j < budget; ++j) {
    if (j < keep) running += ranked[j].second;
    curve[j] = running;
  }
  return curve;
}

std::vector<std::uint64_t> cumulative_curve(const AttackTrace& trace,
                                            std::size_t length) {
  std::vector<std::uint64_t> curve(length, 0);
  std::uint64_t last = 0;
  for (std::size_t j = 0; j < length; ++j) {
    if (j < trace.records.size()) last = trace.records[j].cumulative;
    curve[j] = last;
  }
  return curve;
}

std::vector<double> average_traces(std::span<const AttackTrace> traces) {
  if (traces.empty()) throw Error(ErrorCode::kEmptyInput, "no traces to average");
  std::size_t length = 0;
  for (const AttackTrace& t : traces) {
    length = std::max({length, t.budget, t.records.size()});
  }
  std::vector<double> mean(length, 0.0);
  for (const AttackTrace& t : traces) {
    const auto curve = cumulative_curve(t, length);
    for (std::size_t j = 0; j < length; ++j) mean[j] += static_cast<double>(curve[j]);
  }
  for (double& m : mean) m /= static_cast<double>(traces.size());
  return mean;
}

}  // namespace mabguess
