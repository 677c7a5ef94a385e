#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tutor_rl/metrics/metrics.hpp"

namespace tutor_rl::metrics {

class MissingColumns : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One row of the matrix summary.
struct SummaryRow {
  std::string environment;
  std::string algorithm;
  std::string tutor;
  std::string reuse;  // "on", "off" or "n/a" for runs without a tutor
  std::uint64_t seed = 0;
  double convergence_score = 0.0;
  std::uint64_t fresh_queries = 0;
  std::uint64_t reuses = 0;
  double saved_minutes = 0.0;
  double wall_clock_seconds = 0.0;     // summed tutor response time
  double mean_latency_seconds = 0.0;   // 0 when the tutor never answered
};

const std::vector<std::string>& summary_columns();

std::string format_number(double value);

void write_summary_header(std::ostream& out);
std::string summary_line(const SummaryRow& row);
void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary(std::istream& in);
std::vector<SummaryRow> read_summary(const std::filesystem::path& path);

// Per-run plot data: episode_index, raw_return, smoothed_return, t_normalized, p_hat.
void write_run_csv(std::ostream& out, const PerformanceCurve& raw, const PerformanceCurve& smoothed,
                   const NormalizedCurve& normalized);

}  // namespace tutor_rl::metrics
