#include "mabguess/cli/csv.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <ostream>

namespace mabguess::cli {

namespace {

std::string qhat_header(std::size_t n) {
  std::string header;
  for (std::size_t i = 1; i <= n; ++i) header += fmt::format(",qhat_{}", i);
  return header;
}

}  // namespace

std::string format_real(double value) {
  // Avoid "-0" for values that rounded to zero.
  if (value == 0.0) value = 0.0;
  return fmt::format("{:.9g}", value);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_trace_csv(std::ostream& out, std::span<const AttackTrace> runs,
                     std::size_t dictionaries) {
  fmt::print(out, "run,guess_index,word,successes,cumulative{}\n", qhat_header(dictionaries));
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& records = runs[r].records;
    for (std::size_t j = 0; j < records.size(); ++j) {
      const GuessRecord& rec = records[j];
      std::string row = fmt::format("{},{},{},{},{}", r, j + 1, csv_field(rec.word.str()),
                                    rec.successes, rec.cumulative);
      for (double q : rec.estimate.values()) {
        row += ',';
        row += format_real(q);
      }
      row += '\n';
      out << row;
    }
  }
}

void write_summary_csv(std::ostream& out, std::span<const AttackTrace> runs,
                       std::span<const std::uint64_t> baseline) {
  const std::vector<double> mean = average_traces(runs);
  const std::size_t length = std::max(mean.size(), baseline.size());
  std::vector<double> sum_sq(length, 0.0);
  for (const AttackTrace& t : runs) {
    const auto curve = cumulative_curve(t, length);
    for (std::size_t j = 0; j < mean.size(); ++j) {
      const double d = static_cast<double>(curve[j]) - mean[j];
      sum_sq[j] += d * d;
    }
  }
  const double count = static_cast<double>(runs.size());
  fmt::print(out, "guess_index,mean_cumulative,std_error,baseline\n");
  for (std::size_t j = 0; j < length; ++j) {
    const double m = j < mean.size() ? mean[j] : mean.back();
    const double se = runs.size() > 1 ? std::sqrt(sum_sq[j] / (count - 1) / count) : 0.0;
    const std::uint64_t b = j < baseline.size() ? baseline[j] : baseline.back();
    fmt::print(out, "{},{},{},{}\n", j + 1, format_real(m), format_real(se), b);
  }
}

void write_estimate_csv(std::ostream& out, std::span<const EstimateRow> rows,
                        std::size_t dictionaries) {
  fmt::print(out, "step{},loglik\n", qhat_header(dictionaries));
  for (const EstimateRow& row : rows) {
    std::string line = std::to_string(row.step);
    for (double q : row.weights) {
      line += ',';
      line += format_real(q);
    }
    line += ',';
    line += format_real(row.log_likelihood);
    line += '\n';
    out << line;
  }
}

void write_baseline_csv(std::ostream& out, std::span<const std::uint64_t> baseline) {
  fmt::print(out, "guess_index,cumulative\n");
  for (std::size_t j = 0; j < baseline.size(); ++j) fmt::print(out, "{},{}\n", j + 1, baseline[j]);
}

}  // namespace mabguess::cli
