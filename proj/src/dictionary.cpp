#include "mabguess/dictionary.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

namespace mabguess {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kNonPositiveCount: return "NonPositiveCount";
    case ErrorCode::kDuplicateWord: return "DuplicateWord";
    case ErrorCode::kEmptyDictionary: return "EmptyDictionary";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kInvalidWord: return "InvalidWord";
    case ErrorCode::kInvalidWeights: return "InvalidWeights";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDuplicateGuess: return "DuplicateGuess";
    case ErrorCode::kSuccessExceedsPopulation: return "SuccessExceedsPopulation";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

namespace {

std::string format_error(ErrorCode code, const std::string& message,
                         std::optional<std::size_t> line) {
  std::string out(to_string(code));
  if (line) out += " at line " + std::to_string(*line);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(format_error(code, message, line)),
      code_(code),
      line_(line) {}

Word::Word(std::string token) : token_(std::move(token)) {
  if (token_.empty()) throw Error(ErrorCode::kInvalidWord, "empty word");
  if (token_.find_first_of("\t\n") != std::string::npos) {
    throw Error(ErrorCode::kInvalidWord,
                "word contains a tab or newline: '" + token_ + "'");
  }
}

Dictionary::Dictionary(std::string name, std::vector<Entry> entries)
    : name_(std::move(name)), entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw Error(ErrorCode::kEmptyDictionary,
                "dictionary '" + name_ + "' has no entries");
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.word < b.word;
            });
  rank_index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& e = entries_[i];
    if (e.count == 0) {
      throw Error(ErrorCode::kNonPositiveCount,
                  "word '" + e.word.str() + "' has count 0");
    }
    if (total_count_ > std::numeric_limits<std::uint64_t>::max() - e.count) {
      throw Error(ErrorCode::kInvalidArgument,
                  "total count of '" + name_ + "' overflows");
    }
    total_count_ += e.count;
    if (!rank_index_.emplace(e.word, i + 1).second) {
      throw Error(ErrorCode::kDuplicateWord,
                  "word '" + e.word.str() + "' appears twice");
    }
  }
}

std::optional<std::size_t> Dictionary::rank_of(const Word& word) const {
  auto it = rank_index_.find(word);
  if (it == rank_index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Dictionary::count_of(const Word& word) const {
  auto rank = rank_of(word);
  return rank ? entries_[*rank - 1].count : 0;
}

double Dictionary::probability_of(const Word& word) const {
  auto rank = rank_of(word);
  if (!rank) return 0.0;
  return static_cast<double>(entries_[*rank - 1].count) /
         static_cast<double>(total_count_);
}

std::optional<Word> Dictionary::next_unguessed(const WordSet& guessed) const {
  for (const Entry& e : entries_) {
    if (!guessed.contains(e.word)) return e.word;
  }
  return std::nullopt;
}

Dictionary load_frequency_list(std::string name, std::istream& in) {
  std::vector<Entry> entries;
  std::unordered_map<std::string, std::size_t> first_seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kMalformedLine, "missing tab separator", line_no);
    }
    std::string token = line.substr(0, tab);
    std::string_view count_text = std::string_view(line).substr(tab + 1);
    if (token.empty()) {
      throw Error(ErrorCode::kMalformedLine, "empty word", line_no);
    }
    if (count_text.find('\t') != std::string_view::npos) {
      throw Error(ErrorCode::kMalformedLine, "more than one tab", line_no);
    }

    std::int64_t count = 0;
    const char* first = count_text.data();
    const char* last = first + count_text.size();
    auto [ptr, ec] = std::from_chars(first, last, count);
    if (count_text.empty() || ec != std::errc{} || ptr != last) {
      throw Error(ErrorCode::kMalformedLine,
                  "count '" + std::string(count_text) + "' is not an integer",
                  line_no);
    }
    if (count <= 0) {
      throw Error(ErrorCode::kNonPositiveCount,
                  "count " + std::to_string(count) + " for '" + token + "'",
                  line_no);
    }
    if (auto [it, inserted] = first_seen.emplace(token, line_no); !inserted) {
      throw Error(ErrorCode::kDuplicateWord,
                  "word '" + token + "' already seen at line " +
                      std::to_string(it->second),
                  line_no);
    }
    entries.push_back({Word(std::move(token)), static_cast<std::uint64_t>(count)});
  }
  if (in.bad()) throw Error(ErrorCode::kIoError, "read failure");
  if (entries.empty()) {
    throw Error(ErrorCode::kEmptyDictionary,
                "dictionary '" + name + "' has no entries", line_no);
  }
  return Dictionary(std::move(name), std::move(entries));
}

Dictionary load_frequency_file(std::string name,
                               const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  }
  return load_frequency_list(std::move(name), in);
}

void write_frequency_list(const Dictionary& dictionary, std::ostream& out) {
  for (const Entry& e : dictionary.entries()) {
    out << e.word.str() << '\t' << e.count << '\n';
  }
}

Dictionary from_password_multiset(std::string name,
                                  std::span<const Word> passwords) {
  if (passwords.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no passwords for '" + name + "'");
  }
  std::unordered_map<Word, std::uint64_t> tally;
  for (const Word& w : passwords) ++tally[w];
  std::vector<Entry> entries;
  entries.reserve(tally.size());
  for (auto& [word, count] : tally) entries.push_back({word, count});
  return Dictionary(std::move(name), std::move(entries));
}

Corpus::Corpus(std::vector<Dictionary> dictionaries)
    : dictionaries_(std::move(dictionaries)) {
  if (dictionaries_.empty()) {
    throw Error(ErrorCode::kEmptyInput, "corpus needs at least one dictionary");
  }
  std::unordered_set<std::string> names;
  WordSet seen;
  for (const Dictionary& d : dictionaries_) {
    if (!names.insert(d.name()).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate dictionary name '" + d.name() + "'");
    }
    for (const Entry& e : d.entries()) {
      if (seen.insert(e.word).second) vocabulary_.push_back(e.word);
    }
  }
  std::sort(vocabulary_.begin(), vocabulary_.end());

  const std::size_t n = dictionaries_.size();
  vocabulary_index_.reserve(vocabulary_.size());
  probability_table_.assign(vocabulary_.size() * n, 0.0);
  for (std::size_t v = 0; v < vocabulary_.size(); ++v) {
    vocabulary_index_.emplace(vocabulary_[v], v);
    for (std::size_t i = 0; i < n; ++i) {
      probability_table_[v * n + i] = dictionaries_[i].probability_of(vocabulary_[v]);
    }
  }
}

std::optional<std::size_t> Corpus::vocabulary_index(const Word& word) const {
  auto it = vocabulary_index_.find(word);
  if (it == vocabulary_index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> Corpus::probabilities_at(std::size_t index) const {
  return std::span<const double>(probability_table_)
      .subspan(index * size(), size());
}

std::vector<double> Corpus::probabilities_of(const Word& word) const {
  if (auto index = vocabulary_index(word)) {
    auto row = probabilities_at(*index);
    return {row.begin(), row.end()};
  }
  return std::vector<double>(size(), 0.0);
}

}  // namespace mabguess
