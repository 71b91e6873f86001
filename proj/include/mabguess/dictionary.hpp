#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mabguess/error.hpp"

namespace mabguess {

// A password candidate. Non-empty, never contains '\t' or '\n', compared
// byte for byte.
class Word {
 public:
  explicit Word(std::string token);

  const std::string& str() const noexcept { return token_; }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) {
    return a.token_.compare(b.token_) <=> 0;
  }

 private:
  std::string token_;
};

}  // namespace mabguess

template <>
struct std::hash<mabguess::Word> {
  std::size_t operator()(const mabguess::Word& w) const noexcept {
    return std::hash<std::string>{}(w.str());
  }
};

namespace mabguess {

using WordSet = std::unordered_set<Word>;

struct Entry {
  Word word;
  std::uint64_t count;
};

// Rank-ordered word-frequency distribution. Entries are sorted by count
// descending, ties by ascending byte order; rank 1 is the most frequent.
// Immutable once built.
class Dictionary {
 public:
  // Throws kEmptyDictionary, kNonPositiveCount or kDuplicateWord.
  Dictionary(std::string name, std::vector<Entry> entries);

  const std::string& name() const noexcept { return name_; }
  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::uint64_t total_count() const noexcept { return total_count_; }

  // 1-based rank, or nullopt for words not in the dictionary.
  std::optional<std::size_t> rank_of(const Word& word) const;
  std::uint64_t count_of(const Word& word) const;

  // count / total_count, exactly 0 for absent words.
  double probability_of(const Word& word) const;

  // Most popular word not yet in `guessed`.
  std::optional<Word> next_unguessed(const WordSet& guessed) const;

 private:
  std::string name_;
  std::vector<Entry> entries_;
  std::uint64_t total_count_ = 0;
  std::unordered_map<Word, std::size_t> rank_index_;
};

// Parses `word<TAB>count` lines. Blank lines are skipped; errors carry the
// offending line number.
Dictionary load_frequency_list(std::string name, std::istream& in);
Dictionary load_frequency_file(std::string name,
                               const std::filesystem::path& path);

// Emits entries in rank order, the inverse of load_frequency_list.
void write_frequency_list(const Dictionary& dictionary, std::ostream& out);

// Counts multiplicities of a raw password list.
Dictionary from_password_multiset(std::string name,
                                  std::span<const Word> passwords);

// Ordered collection of dictionaries plus their union vocabulary. The
// vocabulary is sorted in byte order, and for each vocabulary word the
// per-dictionary probabilities are precomputed.
class Corpus {
 public:
  explicit Corpus(std::vector<Dictionary> dictionaries);

  std::size_t size() const noexcept { return dictionaries_.size(); }
  const Dictionary& operator[](std::size_t i) const { return dictionaries_[i]; }
  std::span<const Dictionary> dictionaries() const noexcept {
    return dictionaries_;
  }

  std::span<const Word> union_vocabulary() const noexcept { return vocabulary_; }
  std::optional<std::size_t> vocabulary_index(const Word& word) const;

  // p_i(word) for every dictionary i, for the vocabulary word at `index`.
  std::span<const double> probabilities_at(std::size_t index) const;
  // p_i(word) for every dictionary i; all zeros for unknown words.
  std::vector<double> probabilities_of(const Word& word) const;

 private:
  std::vector<Dictionary> dictionaries_;
  std::vector<Word> vocabulary_;
  std::unordered_map<Word, std::size_t> vocabulary_index_;
  std::vector<double> probability_table_;  // row-major, vocabulary x n
};

}  // namespace mabguess
