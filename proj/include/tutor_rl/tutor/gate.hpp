#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tutor_rl/envs/environment.hpp"
#include "tutor_rl/tutor/backend.hpp"
#include "tutor_rl/tutor/schedule.hpp"

namespace tutor_rl::tutor {

inline constexpr int kDefaultAdviceBudget = 3;
inline constexpr int kDefaultRetryCap = 5;

struct AdviceEntry {
  envs::ActionId action;
  int budget = 0;
  double latency_seconds = 0.0;  // response time of the query that produced it
};

// Advice memo keyed by canonical state key, with a per-entry reuse budget.
class AdviceCache {
 public:
  explicit AdviceCache(int initial_budget = kDefaultAdviceBudget, bool reuse_enabled = true);

  // Cache lookup: on a hit with budget left, spends one unit and returns the
  // stored action. Never reads entries when reuse is disabled.
  std::optional<AdviceEntry> try_reuse(const std::string& key);
  // Stores fresh advice with a full budget, replacing any previous entry.
  void store(const std::string& key, envs::ActionId action, double latency_seconds = 0.0);
  void evict(const std::string& key);

  const AdviceEntry* find(const std::string& key) const;
  std::size_t size() const { return entries_.size(); }
  int initial_budget() const { return initial_budget_; }
  bool reuse_enabled() const { return reuse_enabled_; }
  void set_reuse_enabled(bool enabled) { reuse_enabled_ = enabled; }

 private:
  std::unordered_map<std::string, AdviceEntry> entries_;
  int initial_budget_;
  bool reuse_enabled_;
};

struct TutorStats {
  std::uint64_t backend_queries = 0;   // every prompt sent, including re-prompts
  std::uint64_t fresh_queries = 0;     // set_action calls answered by a fresh valid advice
  std::uint64_t reuses = 0;
  std::uint64_t parse_failures = 0;
  std::uint64_t inapplicable = 0;
  std::uint64_t transport_failures = 0;
  std::uint64_t random_fallbacks = 0;
  std::vector<double> latencies;       // one per backend reply
  std::vector<double> reuse_latencies; // per reuse, latency of the answer it replayed

  double total_latency_seconds() const;
};

enum class AdviceSource { tutor_fresh, tutor_reused, random_fallback };

std::string to_string(AdviceSource source);

struct Advice {
  envs::ActionId action;
  AdviceSource source = AdviceSource::tutor_fresh;
};

class RetriesExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GateOptions {
  int budget = kDefaultAdviceBudget;
  bool reuse = true;
  int retry_cap = kDefaultRetryCap;
  bool enabled = true;
};

// Decides per step whether to consult the tutor and, when it does, runs the
// cached set-action procedure with re-prompting and a random fallback.
class TutorGate {
 public:
  TutorGate(TutorSchedule schedule, std::unique_ptr<TutorBackend> backend, GateOptions options,
            std::uint64_t seed);

  bool enabled() const { return options_.enabled; }
  double probability() const { return schedule_.current_probability(); }

  // One uniform draw; true when u < P.
  bool draw_engagement();

  // Full per-step decision: nullopt when the policy should act (or when the
  // gate is disabled, in which case no random number is consumed).
  std::optional<Advice> maybe_advise(const envs::Environment& env, const envs::Observation& obs);

  // Cached lookup, then query/parse/validate until a legal action or the retry
  // cap. Throws RetriesExhausted on cap.
  Advice set_action(const envs::Environment& env, const envs::Observation& obs);

  // set_action with the uniform-random legal fallback.
  Advice advise(const envs::Environment& env, const envs::Observation& obs);

  // An advised action was rejected by the environment after the fact.
  void report_inapplicable(const envs::Observation& obs);

  void advance() { schedule_.advance(); }

  const TutorSchedule& schedule() const { return schedule_; }
  TutorSchedule& schedule() { return schedule_; }
  const AdviceCache& cache() const { return cache_; }
  AdviceCache& cache() { return cache_; }
  const TutorStats& stats() const { return stats_; }
  const GateOptions& options() const { return options_; }
  const TutorBackend& backend() const { return *backend_; }

 private:
  envs::ActionId random_legal(const envs::ActionMask& mask);

  TutorSchedule schedule_;
  std::unique_ptr<TutorBackend> backend_;
  GateOptions options_;
  AdviceCache cache_;
  TutorStats stats_;
  std::mt19937_64 rng_;
  std::unordered_map<int, std::string> system_prompts_;
};

}  // namespace tutor_rl::tutor
