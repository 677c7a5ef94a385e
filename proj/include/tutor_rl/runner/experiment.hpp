#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tutor_rl/agents/agent.hpp"
#include "tutor_rl/agents/train.hpp"
#include "tutor_rl/metrics/csv.hpp"
#include "tutor_rl/runner/config.hpp"
#include "tutor_rl/tutor/gate.hpp"

namespace tutor_rl::runner {

// Outcome of one (cell, seed) run, persisted as runs/<run_id>.json.
struct RunRecord {
  std::string run_id;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> config;  // canonical_fields snapshot
  std::string environment;
  std::string algorithm;
  std::string tutor;
  std::string reuse;
  std::string curve_index = "episode";

  std::vector<double> episode_returns;
  std::vector<std::int64_t> episode_end_steps;
  std::int64_t steps = 0;
  std::uint64_t updates = 0;
  agents::DecisionCounts decisions;
  tutor::TutorStats tutor_stats;

  double elapsed_seconds = 0.0;  // measured; not part of the summary row
  std::string checkpoint;        // relative to the output directory, empty if none
  bool ok = true;
  std::string error;

  // The curve the convergence score is computed from.
  std::vector<double> performance_curve() const;
};

std::string run_id(const ExperimentConfig& config, std::uint64_t seed);

std::string to_json(const RunRecord& record);
RunRecord record_from_json(const std::string& text);
RunRecord read_record(const std::filesystem::path& path);

// Builds the backend a config names (nullptr when it has no tutor).
std::unique_ptr<tutor::TutorBackend> make_backend(const ExperimentConfig& config, std::uint64_t seed);
std::unique_ptr<tutor::TutorGate> make_gate(const ExperimentConfig& config, std::uint64_t seed);

struct CellRun {
  RunRecord record;
  std::unique_ptr<agents::Agent> agent;
};

// Trains one seed of one cell in memory.
CellRun run_cell(const ExperimentConfig& config, std::uint64_t seed);

// Summary rows for a set of records. Convergence scores are normalized over
// all successful records that share an environment.
std::vector<metrics::SummaryRow> summarize(const std::vector<RunRecord>& records);
metrics::SummaryRow summary_row(const RunRecord& record, double convergence_score);

struct MatrixOptions {
  std::filesystem::path out_dir = "results";
  unsigned parallelism = 1;
  bool resume = false;
  // Restrict every cell to these seeds (empty: the cell's own list).
  std::vector<std::uint64_t> seeds;
  std::function<void(const std::string&)> log;
};

struct MatrixResult {
  std::vector<RunRecord> records;  // in cell/seed order, failures included
  std::vector<metrics::SummaryRow> summary;
  std::size_t executed = 0;
  std::size_t resumed = 0;
  std::size_t failed = 0;
};

// Runs every (cell, seed), writing runs/, curves/, checkpoints/ and
// summary.csv below out_dir. With resume, a run whose record on disk carries
// the same config hash and seed is loaded instead of re-executed.
MatrixResult run_matrix(const std::vector<ExperimentConfig>& cells, const MatrixOptions& options);

// Regenerates curves/<run_id>.csv for every record in out_dir/runs.
std::size_t write_plot_data(const std::filesystem::path& out_dir, int smoothing_window);

}  // namespace tutor_rl::runner
