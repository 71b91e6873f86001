#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "mabguess/dictionary.hpp"

namespace mabguess {

// Zipf-like counts: the word at rank r gets max(1, round(top_count / r^s)).
Dictionary make_zipf_dictionary(std::string name,
                                std::span<const Word> words_by_rank,
                                double exponent, std::uint64_t top_count);

struct SyntheticCorpusOptions {
  std::size_t dictionaries = 3;
  std::size_t words_per_dictionary = 1000;
  // Words present in every dictionary, each at an independently shuffled
  // rank. Zero gives pairwise disjoint supports.
  std::size_t shared_words = 300;
  double zipf_exponent = 1.0;
  std::uint64_t top_count = 100000;
};

// Dictionaries are named "synth1", "synth2", ...; shared words are
// "common<k>" and private words "d<i>w<k>".
Corpus make_synthetic_corpus(const SyntheticCorpusOptions& options,
                             std::uint64_t seed);

}  // namespace mabguess
