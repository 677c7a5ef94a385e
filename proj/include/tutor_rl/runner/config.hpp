#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tutor_rl/agents/config.hpp"
#include "tutor_rl/envs/environment.hpp"
#include "tutor_rl/tutor/backend.hpp"

namespace tutor_rl::runner {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A semantically invalid setting; `field()` is the dotted path, e.g. "dqn.batch_size".
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct TutorSpec {
  enum class Kind { none, scripted, http };
  Kind kind = Kind::none;
  tutor::ScriptedPolicy policy = tutor::ScriptedPolicy::optimal;
  std::string model;  // http only

  // "none", "scripted:<policy>" or "http:<model>".
  std::string label() const;
  static TutorSpec parse(const std::string& label);
  friend bool operator==(const TutorSpec&, const TutorSpec&) = default;
};

struct TutorSettings {
  bool reuse = true;
  int budget = 3;
  int retry_cap = 5;
  double p_initial = 1.0;
  double p_final = 0.1;
  double scripted_latency_seconds = 0.01;
  std::string url;  // empty: TUTOR_RL_LLM_URL or the default
  double timeout_seconds = 120.0;
};

enum class CurveIndex { episode, step };

struct OutputSettings {
  CurveIndex curve_index = CurveIndex::episode;
  int smoothing_window = 7;
  bool checkpoints = true;
};

struct ExperimentConfig {
  std::string name = "experiment";
  envs::EnvKind environment = envs::EnvKind::snake;
  agents::AgentConfig agent;
  TutorSpec tutor;
  TutorSettings tutor_settings;
  std::int64_t total_steps = 0;
  std::int64_t decay_steps = 0;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  envs::EnvOptions env;
  OutputSettings output;

  bool has_tutor() const { return tutor.kind != TutorSpec::Kind::none; }
  // "on"/"off", or "n/a" without a tutor.
  std::string reuse_label() const;
  // environment-algorithm-tutor-reuse, safe as a file name.
  std::string cell_name() const;
};

// Per-environment step budget and decay horizon.
struct StepDefaults {
  std::int64_t total_steps;
  std::int64_t decay_steps;
};
StepDefaults step_defaults(envs::EnvKind kind);

struct LoadedConfig {
  ExperimentConfig base;
  bool is_matrix = false;
  std::size_t raw_cell_count = 0;       // before removing duplicates
  std::vector<ExperimentConfig> cells;  // one entry for single-cell files
};

LoadedConfig load_config(const std::filesystem::path& path);
LoadedConfig load_config_text(const std::string& text);

// Resolved settings as sorted dotted keys; seeds are not included.
std::map<std::string, std::string> canonical_fields(const ExperimentConfig& config);
std::string canonical_text(const ExperimentConfig& config);
// Hex FNV-1a of canonical_text.
std::string config_hash(const ExperimentConfig& config);

}  // namespace tutor_rl::runner
