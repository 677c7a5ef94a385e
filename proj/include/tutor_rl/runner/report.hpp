#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tutor_rl/metrics/csv.hpp"
#include "tutor_rl/metrics/metrics.hpp"

namespace tutor_rl::runner {

// Mean convergence score of one (environment, algorithm, tutor, reuse) cell.
struct ScoreCell {
  std::string environment;
  std::string algorithm;
  std::string tutor;
  std::string reuse;
  double mean_score = 0.0;
  std::size_t seeds = 0;
};

// Reuse accounting for one tutored cell with reuse on, averaged over seeds.
struct LedgerRow {
  std::string environment;
  std::string algorithm;
  std::string tutor;
  double reuses = 0.0;
  double mean_latency_seconds = 0.0;
  double saved_minutes = 0.0;
};

struct Report {
  std::vector<ScoreCell> scores;
  std::vector<LedgerRow> ledger;
  std::vector<std::pair<double, double>> size_score_points;  // (tutor size, cell mean score)
  std::optional<metrics::PearsonResult> correlation;
  std::string correlation_note;
};

// tutor_sizes maps a tutor label ("http:llama3.1:8b") or the part after its
// kind prefix ("llama3.1:8b") to a model size.
Report build_report(const std::vector<metrics::SummaryRow>& rows, const std::map<std::string, double>& tutor_sizes);
Report build_report(const std::filesystem::path& summary_path, const std::map<std::string, double>& tutor_sizes);

std::string format_report(const Report& report);

}  // namespace tutor_rl::runner
