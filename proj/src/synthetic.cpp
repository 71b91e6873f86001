#include "mabguess/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace mabguess {

Dictionary make_zipf_dictionary(std::string name,
                                std::span<const Word> words_by_rank,
                                double exponent, std::uint64_t top_count) {
  if (!(exponent >= 0.0) || top_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "zipf exponent or top count out of range");
  }
  std::vector<Entry> entries;
  entries.reserve(words_by_rank.size());
  for (std::size_t r = 0; r < words_by_rank.size(); ++r) {
    const double raw = static_cast<double>(top_count) /
                       std::pow(static_cast<double>(r + 1), exponent);
    entries.push_back({words_by_rank[r],
                       std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(raw)))});
  }
  return Dictionary(std::move(name), std::move(entries));
}

Corpus make_synthetic_corpus(const SyntheticCorpusOptions& options,
                             std::uint64_t seed) {
  if (options.dictionaries == 0 || options.words_per_dictionary == 0 ||
      options.shared_words > options.words_per_dictionary) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic corpus shape out of range");
  }
  std::mt19937_64 rng(seed);
  std::vector<Dictionary> dictionaries;
  dictionaries.reserve(options.dictionaries);
  for (std::size_t i = 0; i < options.dictionaries; ++i) {
    std::vector<Word> words;
    words.reserve(options.words_per_dictionary);
    for (std::size_t k = 0; k < options.shared_words; ++k) {
      words.emplace_back("common" + std::to_string(k));
    }
    for (std::size_t k = options.shared_words; k < options.words_per_dictionary; ++k) {
      words.emplace_back("d" + std::to_string(i + 1) + "w" + std::to_string(k));
    }
    std::shuffle(words.begin(), words.end(), rng);
    dictionaries.push_back(make_zipf_dictionary("synth" + std::to_string(i + 1), words,
                                                options.zipf_exponent, options.top_count));
  }
  return Corpus(std::move(dictionaries));
}

}  // namespace mabguess
