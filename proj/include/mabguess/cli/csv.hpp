#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mabguess/simulator.hpp"

namespace mabguess::cli {

// Reals are written with 9 significant digits, rows end in '\n'.
std::string format_real(double value);

// Quotes a field holding a comma, quote or line break.
std::string csv_field(std::string_view text);

// run,guess_index,word,successes,cumulative,qhat_1..qhat_n
// `run` is the 0-based run index, guess_index is 1-based.
void write_trace_csv(std::ostream& out, std::span<const AttackTrace> runs,
                     std::size_t dictionaries);

// guess_index,mean_cumulative,std_error,baseline
void write_summary_csv(std::ostream& out, std::span<const AttackTrace> runs,
                       std::span<const std::uint64_t> baseline);

struct EstimateRow {
  int step;
  std::vector<double> weights;
  double log_likelihood;
};

// step,qhat_1..qhat_n,loglik
void write_estimate_csv(std::ostream& out, std::span<const EstimateRow> rows,
                        std::size_t dictionaries);

// guess_index,cumulative
void write_baseline_csv(std::ostream& out, std::span<const std::uint64_t> baseline);

}  // namespace mabguess::cli
