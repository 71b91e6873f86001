#include "mabguess/cli/commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <thread>

#include "mabguess/cli/csv.hpp"

namespace mabguess::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidWeights:
    case ErrorCode::kDimensionMismatch:
      return kExitConfig;
    case ErrorCode::kIoError:
    case ErrorCode::kMalformedLine:
    case ErrorCode::kNonPositiveCount:
    case ErrorCode::kDuplicateWord:
    case ErrorCode::kEmptyDictionary:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kInvalidWord:
      return kExitIo;
    case ErrorCode::kDuplicateGuess:
    case ErrorCode::kSuccessExceedsPopulation:
    case ErrorCode::kInvariantViolation:
      return kExitInternal;
  }
  return kExitInternal;
}

void apply_overrides(ExperimentConfig& config, const Overrides& overrides, bool for_compose) {
  if (overrides.seed) {
    if (for_compose && config.composition) config.composition->seed = *overrides.seed;
    else config.seed = *overrides.seed;
  }
  if (overrides.out) config.output = *overrides.out;
  if (overrides.runs) config.runs = *overrides.runs;
  if (overrides.guesses) config.guesses = *overrides.guesses;
  if (overrides.init) config.init = *overrides.init;
  if (overrides.guess) config.guess = *overrides.guess;
  config.validate();
}

namespace {

std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "cannot create '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  return out;
}

void close_output(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw Error(ErrorCode::kIoError, "failed writing '" + path.string() + "'");
}

void log_line(const std::string& line) { fmt::print(stderr, "mabguess: {}\n", line); }

}  // namespace

Corpus load_corpus(const ExperimentConfig& config) {
  std::vector<Dictionary> dictionaries;
  for (const DictionarySource& d : config.dictionaries) {
    try {
      dictionaries.push_back(load_frequency_file(d.name, d.path));
    } catch (const Error& e) {
      throw Error(e.code(), d.path.string() + ": " + e.what(), e.line());
    }
  }
  return Corpus(std::move(dictionaries));
}

PasswordSet obtain_password_set(const ExperimentConfig& config, const Corpus& corpus) {
  if (config.composition) {
    return compose_password_set(corpus, MixtureWeights(config.composition->proportions),
                                config.composition->users, config.composition->seed);
  }
  if (config.password_set) {
    try {
      return read_password_file(*config.password_set);
    } catch (const Error& e) {
      throw Error(e.code(), config.password_set->string() + ": " + e.what(), e.line());
    }
  }
  throw Error(ErrorCode::kConfigError,
              "composition: a [composition] or [password_set] section is required");
}

std::vector<fs::path> cmd_compose(const ExperimentConfig& config) {
  if (!config.composition) {
    throw Error(ErrorCode::kConfigError, "composition: section required for compose");
  }
  const Corpus corpus = load_corpus(config);
  const PasswordSet ps = obtain_password_set(config, corpus);

  const fs::path passwords = config.output / "passwords.txt";
  const fs::path meta = config.output / "passwords.meta";
  {
    auto out = open_output(passwords);
    write_password_set(ps, out);
    close_output(out, passwords);
  }
  {
    auto out = open_output(meta);
    const Composition& c = *config.composition;
    std::vector<std::string> shares;
    for (double q : c.proportions) shares.push_back(fmt::format("{}", q));
    fmt::print(out, "[composition]\nproportions = {}\nusers = {}\nseed = {}\n\n[sources]\n",
               fmt::join(shares, ", "), c.users, c.seed);
    const auto counts = ps.source_counts();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      fmt::print(out, "{} = {}\n", corpus[i].name(), counts[i]);
    }
    close_output(out, meta);
  }
  log_line(fmt::format("composed {} users into {}", ps.size(), passwords.string()));
  return {passwords, meta};
}

std::vector<fs::path> cmd_attack(const ExperimentConfig& config, unsigned threads) {
  const Corpus corpus = load_corpus(config);
  const PasswordSet ps = obtain_password_set(config, corpus);
  log_line(fmt::format("attack: {} runs x {} guesses, init={} guess={}, {} users", config.runs,
                       config.guesses, to_string(config.init), to_string(config.guess),
                       ps.size()));

  std::vector<std::optional<AttackTrace>> slots(config.runs);
  std::vector<std::exception_ptr> failures(config.runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < config.runs; r = next++) {
      try {
        slots[r] = run_attack(corpus, ps, config.init, config.guess, config.guesses,
                              config.descent, config.seed + r);
      } catch (...) {
        failures[r] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.runs));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::vector<AttackTrace> traces;
  traces.reserve(slots.size());
  for (auto& s : slots) traces.push_back(std::move(*s));
  const auto baseline = optimal_baseline(ps, config.guesses);
  for (const AttackTrace& t : traces) {
    const auto curve = cumulative_curve(t, config.guesses);
    for (std::size_t j = 0; j < curve.size(); ++j) {
      if (curve[j] > baseline[j]) {
        throw Error(ErrorCode::kInvariantViolation, "a run beat the optimal baseline");
      }
    }
  }

  const fs::path trace_path = config.output / "trace.csv";
  const fs::path summary_path = config.output / "summary.csv";
  {
    auto out = open_output(trace_path);
    write_trace_csv(out, traces, corpus.size());
    close_output(out, trace_path);
  }
  {
    auto out = open_output(summary_path);
    write_summary_csv(out, traces, baseline);
    close_output(out, summary_path);
  }
  const auto mean = average_traces(traces);
  log_line(fmt::format("mean cumulative successes at guess {}: {} (optimal {})",
                       config.guesses, format_real(mean.back()), baseline.back()));
  return {trace_path, summary_path};
}

std::vector<fs::path> cmd_estimate(const ExperimentConfig& config,
                                   std::span<const Word> guesses) {
  if (guesses.empty()) throw Error(ErrorCode::kConfigError, "estimate.words: no guesses given");
  const Corpus corpus = load_corpus(config);
  const PasswordSet ps = obtain_password_set(config, corpus);

  GuessHistory history(ps.size());
  for (const Word& w : guesses) {
    if (history.contains(w)) {
      throw Error(ErrorCode::kConfigError, "estimate.words: '" + w.str() + "' given twice");
    }
    history.add(w, oracle_count(ps, w));
  }
  Rng rng(config.seed);
  const MixtureWeights init = initialize_weights(config.init, corpus.size(), std::nullopt, rng);

  std::vector<EstimateRow> rows;
  const auto result = estimate(corpus, history, init, config.descent, [&](const DescentStep& s) {
    rows.push_back({s.step, {s.weights.values().begin(), s.weights.values().end()},
                    s.log_likelihood});
  });

  const fs::path path = config.output / "estimate.csv";
  auto out = open_output(path);
  write_estimate_csv(out, rows, corpus.size());
  close_output(out, path);
  log_line(fmt::format("estimate: {} guesses, {} steps, log-likelihood {}", guesses.size(),
                       result.steps_taken, format_real(result.log_likelihood)));
  return {path};
}

std::vector<fs::path> cmd_baseline(const ExperimentConfig& config) {
  const Corpus corpus = load_corpus(config);
  const PasswordSet ps = obtain_password_set(config, corpus);
  const auto baseline = optimal_baseline(ps, config.guesses);
  const fs::path path = config.output / "baseline.csv";
  auto out = open_output(path);
  write_baseline_csv(out, baseline);
  close_output(out, path);
  return {path};
}

std::vector<fs::path> cmd_synth(const SyntheticCorpusOptions& options, std::uint64_t seed,
                                const fs::path& out_dir) {
  const Corpus corpus = make_synthetic_corpus(options, seed);
  std::vector<fs::path> written;
  for (const Dictionary& d : corpus.dictionaries()) {
    const fs::path path = out_dir / (d.name() + ".txt");
    auto out = open_output(path);
    write_frequency_list(d, out);
    close_output(out, path);
    written.push_back(path);
  }
  return written;
}

}  // namespace mabguess::cli
