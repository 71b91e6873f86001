#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mabguess {

enum class ErrorCode {
  kMalformedLine,
  kNonPositiveCount,
  kDuplicateWord,
  kEmptyDictionary,
  kEmptyInput,
  kInvalidWord,
  kInvalidWeights,
  kInvalidArgument,
  kDimensionMismatch,
  kDuplicateGuess,
  kSuccessExceedsPopulation,
  kConfigError,
  kIoError,
  kInvariantViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library. `line()` is set for errors that point
// at a specific line of an input stream (1-based).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace mabguess
